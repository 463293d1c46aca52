#include "nlpkit/utf8.hpp"

#include <stdexcept>

namespace nlpkit {

namespace {

[[noreturn]] void bad_utf8(std::size_t pos) {
  throw std::runtime_error("malformed UTF-8 at byte offset " +
                           std::to_string(pos));
}

bool is_cont(unsigned char b) { return (b & 0xc0) == 0x80; }

// Combining marks and joiners that attach to the preceding cluster.
bool is_cluster_extend(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036f) ||   // combining diacritical marks
         (cp >= 0x0483 && cp <= 0x0489) ||   // cyrillic combining
         (cp >= 0x0591 && cp <= 0x05bd) ||   // hebrew points
         (cp >= 0x0610 && cp <= 0x061a) ||   // arabic marks
         (cp >= 0x064b && cp <= 0x065f) ||   // arabic diacritics
         (cp >= 0x1ab0 && cp <= 0x1aff) ||   // combining extended
         (cp >= 0x1dc0 && cp <= 0x1dff) ||   // combining supplement
         (cp >= 0x20d0 && cp <= 0x20ff) ||   // combining for symbols
         (cp >= 0xfe00 && cp <= 0xfe0f) ||   // variation selectors
         (cp >= 0xfe20 && cp <= 0xfe2f) ||   // combining half marks
         (cp >= 0x1f3fb && cp <= 0x1f3ff) || // emoji skin tones
         (cp >= 0xe0100 && cp <= 0xe01ef);   // variation selectors supplement
}

bool is_regional_indicator(char32_t cp) {
  return cp >= 0x1f1e6 && cp <= 0x1f1ff;
}

constexpr char32_t kZwj = 0x200d;

}  // namespace

char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) bad_utf8(pos);
  const unsigned char b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    bad_utf8(pos);
  }
  if (pos + len > text.size()) bad_utf8(pos);
  for (int i = 1; i < len; ++i) {
    const unsigned char b = static_cast<unsigned char>(text[pos + i]);
    if (!is_cont(b)) bad_utf8(pos + i);
    cp = (cp << 6) | (b & 0x3f);
  }
  // Reject overlong encodings, surrogates and out-of-range scalars.
  static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len]) bad_utf8(pos);
  if (cp >= 0xd800 && cp <= 0xdfff) bad_utf8(pos);
  if (cp > 0x10ffff) bad_utf8(pos);
  pos += len;
  return cp;
}

bool valid_utf8(std::string_view text) {
  std::size_t pos = 0;
  try {
    while (pos < text.size()) decode_utf8(text, pos);
  } catch (const std::runtime_error&) {
    return false;
  }
  return true;
}

std::vector<std::string> split_graphemes(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  bool open_ri = false;       // unpaired regional indicator in current cluster
  bool after_zwj = false;     // previous code point was ZWJ
  std::size_t cluster_start = 0;
  bool have_cluster = false;

  while (pos < text.size()) {
    const std::size_t cp_start = pos;
    const char32_t cp = decode_utf8(text, pos);

    bool extend = false;
    if (have_cluster) {
      if (after_zwj) {
        extend = true;
      } else if (cp == kZwj || is_cluster_extend(cp)) {
        extend = true;
      } else if (is_regional_indicator(cp) && open_ri) {
        extend = true;
        open_ri = false;
      }
    }

    if (!extend) {
      if (have_cluster) {
        out.emplace_back(text.substr(cluster_start, cp_start - cluster_start));
      }
      cluster_start = cp_start;
      have_cluster = true;
      open_ri = is_regional_indicator(cp);
    }
    after_zwj = (cp == kZwj);
  }
  if (have_cluster) {
    out.emplace_back(text.substr(cluster_start, text.size() - cluster_start));
  }
  return out;
}

std::size_t grapheme_count(std::string_view text) {
  return split_graphemes(text).size();
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace nlpkit
