#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "argrec/corpus.hpp"
#include "argrec/dialog.hpp"
#include "argrec/efm.hpp"
#include "argrec/personalize.hpp"

namespace argrec::explain {

inline constexpr std::size_t kCollapsedPremises = 3;
inline constexpr std::size_t kMaxBacking = 5;
inline constexpr std::size_t kMaxRebuttal = 5;
inline constexpr std::size_t kMaxTermButtons = 5;

inline constexpr std::string_view kClaimStatement = "claim.predicted_rating";
inline constexpr std::string_view kRefutationStatement = "refutation.majority_positive";

struct FeatureStat {
  Feature feature = Feature::room;
  std::uint32_t pos_count = 0;
  std::uint32_t neg_count = 0;
  int pct_positive = 0;
  int pct_negative = 0;

  bool operator==(const FeatureStat&) const = default;
};

/// Percentages from counts: pct_positive rounded half up, pct_negative its
/// complement. Empty when there are no polar opinions.
std::optional<FeatureStat> make_feature_stat(Feature f, std::uint32_t pos, std::uint32_t neg);

/// Per-feature statistics of one item's records, neutral sentences excluded.
/// Features without polar opinions are omitted. Throws unknown_item when no
/// record belongs to the item.
std::vector<FeatureStat> feature_stats(const std::string& item_id,
                                       const std::vector<corpus::SentenceRecord>& records);

struct Excerpt {
  std::string text;
  std::string review_id;
  Polarity polarity = Polarity::neutral;

  bool operator==(const Excerpt&) const = default;
};

struct Premise {
  Feature feature = Feature::room;
  std::optional<FeatureStat> stat;  // empty: no data

  bool operator==(const Premise&) const = default;
};

struct Claim {
  double predicted_rating = 0.0;
  int circles = 0;
  std::string statement_code;

  bool operator==(const Claim&) const = default;
};

struct ExplanationPayload {
  Level level = Level::list;
  std::optional<std::string> item_id;
  std::optional<Claim> claim;
  std::vector<Premise> premises;
  std::vector<Excerpt> backing;
  std::vector<Excerpt> rebuttal;
  std::optional<std::string> refutation;
  std::optional<Feature> feature;
  std::optional<std::string> term;
  std::vector<std::string> fine_grained_terms;
  bool expanded = false;
  Style style = Style::text;
  std::set<MoveKind> available_moves;

  bool operator==(const ExplanationPayload&) const = default;
};

/// The parts of a session the engine needs.
struct Viewer {
  std::size_t proxy_user = 0;
  Interactivity interactivity = Interactivity::low;
  Style style = Style::text;

  static Viewer of(const personalize::Session& s) {
    return Viewer{s.proxy_user_index, s.interactivity, s.style};
  }
};

/// Builds argument payloads from a trained model and the classified
/// records. Holds no mutable state.
class Engine {
 public:
  Engine(std::shared_ptr<const efm::Model> model, std::vector<corpus::SentenceRecord> records);

  const efm::Model& model() const noexcept { return *model_; }
  const std::vector<corpus::SentenceRecord>& records() const noexcept { return records_; }
  bool has_item(const std::string& item_id) const;

  ExplanationPayload list_view(const Viewer& v) const;
  ExplanationPayload overview(const Viewer& v, const std::string& item_id, bool expanded) const;
  ExplanationPayload feature_report(const Viewer& v, const std::string& item_id,
                                    Feature feature) const;
  ExplanationPayload fine_grained_report(const Viewer& v, const std::string& item_id,
                                         Feature feature, const std::string& term) const;

  /// Payload for whatever level the state is at.
  ExplanationPayload for_state(const Viewer& v, const DialogState& s) const;

  /// Top fine-grained terms for (item, feature): frequency desc, then lexicographic.
  std::vector<std::string> term_buttons(const std::string& item_id, Feature feature) const;
  bool has_term(const std::string& item_id, Feature feature, const std::string& term) const;

 private:
  const std::vector<std::size_t>& item_records(const std::string& item_id) const;
  std::size_t item_index(const std::string& item_id) const;
  Claim claim_for(const Viewer& v, std::size_t item) const;
  std::optional<FeatureStat> stat_for(const std::string& item_id, Feature f) const;
  ExplanationPayload base(const Viewer& v, Level level, const std::string& item_id) const;

  std::shared_ptr<const efm::Model> model_;
  std::vector<corpus::SentenceRecord> records_;
  std::map<std::string, std::vector<std::size_t>> by_item_;
};

/// Fixed-template text rendering. Throws style_mismatch unless style is text.
std::string render_text(const ExplanationPayload& p);

/// Per-feature sentence of the text template.
std::string premise_sentence(const Premise& p);

nlohmann::json to_json(const ExplanationPayload& p);

}  // namespace argrec::explain
