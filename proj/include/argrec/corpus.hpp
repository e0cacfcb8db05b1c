#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argrec/types.hpp"

namespace argrec {

namespace aspect {
class Classifier;
}

namespace corpus {

struct RawSentence {
  std::string text;
  std::optional<std::string> gold_aspect;
  std::optional<Polarity> gold_polarity;

  bool operator==(const RawSentence&) const = default;
};

struct Review {
  std::string review_id;
  std::string item_id;
  std::string user_id;
  int rating = 0;  // 1..5
  std::vector<RawSentence> sentences;

  bool operator==(const Review&) const = default;
};

/// One classified review sentence. Records without a feature are carried
/// through but never counted.
struct SentenceRecord {
  std::string review_id;
  std::string item_id;
  std::string user_id;
  std::string text;
  std::optional<Feature> feature;
  Polarity polarity = Polarity::neutral;
  std::optional<std::string> fine_grained_term;

  bool operator==(const SentenceRecord&) const = default;
};

/// Lowercase, split on anything that is not an ASCII letter or digit.
/// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Tokens of `term` joined by single spaces; the canonical lexicon key.
std::string normalize_term(std::string_view term);

/// True when the token sequence of `term` occurs contiguously in `text`.
bool contains_term(std::string_view text, std::string_view term);

/// Fine-grained term -> general feature.
class FineGrainedLexicon {
 public:
  FineGrainedLexicon() = default;

  /// Throws validation Error when the normalized term is empty or already present.
  void add(std::string_view term, Feature feature);

  /// Parses "term<TAB>category" lines; '#' starts a comment.
  static FineGrainedLexicon parse(std::istream& in);
  static FineGrainedLexicon load(const std::filesystem::path& path);

  std::optional<Feature> lookup(std::string_view term) const;
  const std::map<std::string, Feature>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<std::string, Feature> entries_;
};

/// Lowercased exact-match lookup.
std::optional<Feature> map_fine_to_general(std::string_view term, const FineGrainedLexicon& lex);

std::vector<Review> parse_corpus(std::istream& in);
std::vector<Review> parse_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<Review>& reviews);

std::vector<SentenceRecord> build_sentence_records(const std::vector<Review>& reviews,
                                                   const aspect::Classifier& classifier);

std::vector<SentenceRecord> read_records(std::istream& in);
std::vector<SentenceRecord> read_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const std::vector<SentenceRecord>& records);

}  // namespace corpus
}  // namespace argrec
