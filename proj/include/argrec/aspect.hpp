#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "argrec/corpus.hpp"
#include "argrec/types.hpp"

namespace argrec::aspect {

enum class Mode { gold_passthrough, lexicon_rule };

struct AspectMatch {
  std::optional<Feature> feature;
  std::optional<std::string> term;

  bool operator==(const AspectMatch&) const = default;
};

struct Classification {
  std::optional<Feature> feature;
  Polarity polarity = Polarity::neutral;
  std::optional<std::string> term;
};

/// Sentiment terms and negation cues. Loaded from "term<TAB>label" lines where
/// label is positive, negative or negation.
struct SentimentLexicon {
  std::map<std::string, Polarity> terms;
  std::set<std::string> negations;

  static SentimentLexicon parse(std::istream& in);
  static SentimentLexicon load(const std::filesystem::path& path);
};

inline constexpr std::size_t kNegationWindow = 3;

/// Rule-based aspect and polarity classifier. Immutable after construction.
class Classifier {
 public:
  Classifier(Mode mode, corpus::FineGrainedLexicon lexicon, SentimentLexicon sentiment);

  Mode mode() const noexcept { return mode_; }
  const corpus::FineGrainedLexicon& lexicon() const noexcept { return lexicon_; }
  const SentimentLexicon& sentiment() const noexcept { return sentiment_; }

  /// Longest lexicon match; ties go to the lowest feature code, then to the
  /// earliest position in the sentence.
  AspectMatch classify_aspect(std::string_view text) const;

  /// Signed count of sentiment terms, each flipped when a negation cue
  /// appears in the kNegationWindow tokens before it.
  Polarity classify_polarity(std::string_view text) const;

  /// Full decision for one sentence. Gold annotations win in passthrough
  /// mode; missing or unmappable gold fields fall back to the rules.
  Classification classify(const corpus::RawSentence& sentence) const;

 private:
  Mode mode_;
  corpus::FineGrainedLexicon lexicon_;
  SentimentLexicon sentiment_;
  std::size_t max_term_tokens_ = 1;
};

}  // namespace argrec::aspect
