#include "nlpkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "nlpkit/utf8.hpp"

namespace nlpkit {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failure: " + path);
  return buf.str();
}

// Splits into lines on '\n'; a trailing '\r' is stripped so CRLF input
// behaves like LF input. A final line without newline still counts.
std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) {
      if (start < content.size()) lines.push_back(content.substr(start));
      break;
    }
    std::string line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

void require_utf8(const std::string& line, std::size_t line_no) {
  if (!valid_utf8(line)) {
    throw MalformedInputError("invalid UTF-8", line_no);
  }
}

}  // namespace

TagScheme TagScheme::bmes() {
  return TagScheme{TagSchemeKind::kBmes, {"B", "M", "E", "S"}};
}

TagScheme TagScheme::bio(std::vector<std::string> entity_types) {
  std::sort(entity_types.begin(), entity_types.end());
  entity_types.erase(
      std::unique(entity_types.begin(), entity_types.end()),
      entity_types.end());
  TagScheme scheme;
  scheme.kind = TagSchemeKind::kBio;
  scheme.labels.push_back("O");
  for (const auto& t : entity_types) {
    scheme.labels.push_back("B-" + t);
    scheme.labels.push_back("I-" + t);
  }
  return scheme;
}

bool TagScheme::contains(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

std::vector<SegmentedSentence> parse_segmented(const std::string& content) {
  std::vector<SegmentedSentence> corpus;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    require_utf8(line, i + 1);
    SegmentedSentence sentence;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t sp = line.find(' ', start);
      std::string token = (sp == std::string::npos)
                              ? line.substr(start)
                              : line.substr(start, sp - start);
      if (token.empty()) {
        throw MalformedInputError("empty token (doubled or trailing space)",
                                  i + 1);
      }
      sentence.tokens.push_back(std::move(token));
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

std::vector<TaggedSentence> parse_tagged(const std::string& content,
                                         const TagScheme* scheme) {
  std::vector<TaggedSentence> corpus;
  TaggedSentence current;
  const auto lines = split_lines(content);
  auto flush = [&] {
    if (!current.units.empty()) {
      corpus.push_back(std::move(current));
      current = TaggedSentence{};
    }
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) {
      flush();
      continue;
    }
    require_utf8(line, i + 1);
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw MalformedInputError("expected `unit<TAB>label`", i + 1);
    }
    std::string unit = line.substr(0, tab);
    std::string label = line.substr(tab + 1);
    if (unit.empty() || label.empty()) {
      throw MalformedInputError("empty unit or label", i + 1);
    }
    if (scheme != nullptr && !scheme->contains(label)) {
      throw MalformedInputError("label `" + label + "` outside tag alphabet",
                                i + 1);
    }
    current.units.push_back(std::move(unit));
    current.labels.push_back(std::move(label));
  }
  flush();
  return corpus;
}

std::vector<Document> parse_labeled(const std::string& content,
                                    bool allow_empty_text) {
  std::vector<Document> corpus;
  std::set<std::string> seen_ids;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    require_utf8(line, i + 1);
    std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos) {
      throw MalformedInputError("expected `id<TAB>label<TAB>text`", i + 1);
    }
    std::size_t t2 = line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw MalformedInputError("expected `id<TAB>label<TAB>text`", i + 1);
    }
    if (line.find('\t', t2 + 1) != std::string::npos) {
      throw MalformedInputError("tab inside text field", i + 1);
    }
    Document doc;
    doc.id = line.substr(0, t1);
    doc.label = line.substr(t1 + 1, t2 - t1 - 1);
    doc.text = line.substr(t2 + 1);
    if (doc.id.empty()) throw MalformedInputError("empty document id", i + 1);
    if (doc.label->empty()) {
      throw MalformedInputError("empty document label", i + 1);
    }
    if (doc.text.empty() && !allow_empty_text) {
      throw MalformedInputError("empty document text", i + 1);
    }
    if (!seen_ids.insert(doc.id).second) {
      throw MalformedInputError("duplicate document id `" + doc.id + "`",
                                i + 1);
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<SegmentedSentence> load_segmented_corpus(const std::string& path) {
  return parse_segmented(read_file(path));
}

std::vector<TaggedSentence> load_tagged_corpus(const std::string& path,
                                               const TagScheme* scheme) {
  return parse_tagged(read_file(path), scheme);
}

std::vector<Document> load_labeled_corpus(const std::string& path,
                                          bool allow_empty_text) {
  return parse_labeled(read_file(path), allow_empty_text);
}

TaggedSentence encode_bmes(const SegmentedSentence& sentence) {
  TaggedSentence tagged;
  for (const std::string& token : sentence.tokens) {
    if (token.empty()) throw std::runtime_error("empty token");
    auto graphemes = split_graphemes(token);
    if (graphemes.size() == 1) {
      tagged.units.push_back(graphemes[0]);
      tagged.labels.emplace_back("S");
      continue;
    }
    for (std::size_t i = 0; i < graphemes.size(); ++i) {
      tagged.units.push_back(graphemes[i]);
      if (i == 0) {
        tagged.labels.emplace_back("B");
      } else if (i + 1 == graphemes.size()) {
        tagged.labels.emplace_back("E");
      } else {
        tagged.labels.emplace_back("M");
      }
    }
  }
  return tagged;
}

SegmentedSentence decode_bmes(const TaggedSentence& tagged) {
  if (tagged.units.size() != tagged.labels.size()) {
    throw std::runtime_error("unit/label length mismatch");
  }
  SegmentedSentence out;
  std::string word;
  auto emit = [&] {
    if (!word.empty()) {
      out.tokens.push_back(std::move(word));
      word.clear();
    }
  };
  for (std::size_t i = 0; i < tagged.units.size(); ++i) {
    const std::string& unit = tagged.units[i];
    const std::string& label = tagged.labels[i];
    if (label == "B") {
      emit();
      word = unit;
    } else if (label == "M") {
      word += unit;  // stray M opens a word
    } else if (label == "E") {
      word += unit;
      emit();
    } else if (label == "S") {
      emit();
      out.tokens.push_back(unit);
    } else {
      throw std::runtime_error("label `" + label + "` outside BMES");
    }
  }
  emit();
  return out;
}

std::vector<EntitySpan> decode_spans(const TaggedSentence& tagged) {
  std::vector<EntitySpan> spans;
  bool open = false;
  EntitySpan current;
  auto close = [&](std::size_t end) {
    if (open) {
      current.end = end;
      spans.push_back(current);
      open = false;
    }
  };
  for (std::size_t i = 0; i < tagged.labels.size(); ++i) {
    const std::string& label = tagged.labels[i];
    if (label == "O") {
      close(i);
    } else if (label.size() > 2 && label[1] == '-' &&
               (label[0] == 'B' || label[0] == 'I')) {
      const std::string type = label.substr(2);
      if (label[0] == 'B' || !open || current.type != type) {
        // B always starts a span; stray I does too.
        close(i);
        current = EntitySpan{i, i, type};
        open = true;
      }
    } else {
      throw std::runtime_error("label `" + label + "` outside BIO");
    }
  }
  close(tagged.labels.size());
  return spans;
}

std::vector<std::string> encode_spans(const std::vector<EntitySpan>& spans,
                                      std::size_t length) {
  std::vector<std::string> labels(length, "O");
  for (const EntitySpan& span : spans) {
    if (span.start >= span.end || span.end > length) {
      throw std::runtime_error("span out of bounds");
    }
    for (std::size_t i = span.start; i < span.end; ++i) {
      if (labels[i] != "O") throw std::runtime_error("overlapping spans");
      labels[i] = (i == span.start ? "B-" : "I-") + span.type;
    }
  }
  return labels;
}

}  // namespace nlpkit
