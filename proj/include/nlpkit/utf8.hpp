#ifndef NLPKIT_UTF8_HPP_
#define NLPKIT_UTF8_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nlpkit {

// Decodes one UTF-8 code point starting at byte offset `pos`.
// Returns the code point and advances `pos` past it.
// Throws std::runtime_error on malformed input (truncated sequence,
// overlong encoding, surrogate, out-of-range scalar).
char32_t decode_utf8(std::string_view text, std::size_t& pos);

// True if the whole string is valid UTF-8.
bool valid_utf8(std::string_view text);

// Splits text into grapheme clusters. A cluster is a base code point plus
// any trailing combining marks, variation selectors, ZWJ-joined sequences
// and emoji modifiers; regional-indicator pairs form one cluster. This is
// a practical subset of extended grapheme clustering, enough to keep
// multi-byte characters and common composed sequences intact.
std::vector<std::string> split_graphemes(std::string_view text);

// Number of grapheme clusters in text.
std::size_t grapheme_count(std::string_view text);

// ASCII lowercase fold; non-ASCII bytes pass through unchanged.
std::string ascii_lower(std::string_view text);

}  // namespace nlpkit

#endif  // NLPKIT_UTF8_HPP_
