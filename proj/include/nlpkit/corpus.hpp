#ifndef NLPKIT_CORPUS_HPP_
#define NLPKIT_CORPUS_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpkit {

// One labeled document from the TSV format: id<TAB>label<TAB>text.
struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

// Tokens of one segmented sentence. No token is empty or contains the
// separator; concatenating tokens reproduces the raw sentence.
struct SegmentedSentence {
  std::vector<std::string> tokens;

  bool operator==(const SegmentedSentence&) const = default;
};

// Parallel unit/label sequences: units are characters (segmentation) or
// tokens (NER), labels come from the active tag scheme.
struct TaggedSentence {
  std::vector<std::string> units;
  std::vector<std::string> labels;

  bool operator==(const TaggedSentence&) const = default;
};

enum class TagSchemeKind { kBmes, kBio };

struct TagScheme {
  TagSchemeKind kind = TagSchemeKind::kBmes;
  std::vector<std::string> labels;

  static TagScheme bmes();
  // BIO inventory over the given entity types: O first, then B-t/I-t per
  // type in sorted order.
  static TagScheme bio(std::vector<std::string> entity_types);

  bool contains(const std::string& label) const;
};

// Half-open [start, end) span of a typed entity over sentence units.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  bool operator==(const EntitySpan&) const = default;
};

struct MalformedInputError : std::runtime_error {
  MalformedInputError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " at line " + std::to_string(line)),
        line_number(line) {}
  std::size_t line_number;
};

// Loaders. Blank lines never yield records; all input must be valid UTF-8.
// Malformed lines raise MalformedInputError with the 1-based line number.
std::vector<SegmentedSentence> load_segmented_corpus(const std::string& path);

// Tagged format: `unit<TAB>label` per line, blank line ends a sentence.
// When `scheme` is given every label must belong to it.
std::vector<TaggedSentence> load_tagged_corpus(
    const std::string& path, const TagScheme* scheme = nullptr);

// Labeled-document TSV: `id<TAB>label<TAB>text`. Duplicate ids are
// rejected; empty text is rejected unless allow_empty_text.
std::vector<Document> load_labeled_corpus(const std::string& path,
                                          bool allow_empty_text = false);

// In-memory parsers behind the file loaders (line numbers start at 1).
std::vector<SegmentedSentence> parse_segmented(const std::string& content);
std::vector<TaggedSentence> parse_tagged(const std::string& content,
                                         const TagScheme* scheme = nullptr);
std::vector<Document> parse_labeled(const std::string& content,
                                    bool allow_empty_text = false);

// Segmentation <-> character tagging.
// k-char token -> B M... E, single char -> S. Units are grapheme clusters.
TaggedSentence encode_bmes(const SegmentedSentence& sentence);

// Total decoding with repair: a stray M or E opens a word, a word still
// open at the end is closed.
SegmentedSentence decode_bmes(const TaggedSentence& tagged);

// BIO labels -> entity spans. Stray I-t opens a new span of type t.
std::vector<EntitySpan> decode_spans(const TaggedSentence& tagged);

// Non-overlapping sorted spans -> BIO labels over `length` units.
std::vector<std::string> encode_spans(const std::vector<EntitySpan>& spans,
                                      std::size_t length);

}  // namespace nlpkit

#endif  // NLPKIT_CORPUS_HPP_
