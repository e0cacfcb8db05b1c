#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "argrec/dialog.hpp"
#include "argrec/efm.hpp"
#include "argrec/types.hpp"

namespace argrec::personalize {

inline constexpr std::size_t kStatedFeatureCount = 5;
inline constexpr std::size_t kDefaultRecommendationLimit = 30;

using FeatureRanking = std::array<Feature, kFeatureCount>;

/// A participant's five most important features, most important first.
class StatedPreferences {
 public:
  /// Throws validation Error unless exactly five distinct features are given.
  explicit StatedPreferences(std::span<const Feature> ranked);

  const std::array<Feature, kStatedFeatureCount>& ranked() const noexcept { return ranked_; }
  bool operator==(const StatedPreferences&) const = default;

 private:
  std::array<Feature, kStatedFeatureCount> ranked_{};
};

/// Features sorted by the attention row descending, ties by feature code.
FeatureRanking rank_features(const std::array<double, kFeatureCount>& attention);
FeatureRanking rank_features_for_user(const efm::Model& model, std::size_t user);

/// Spearman footrule over the stated features only; 1-based ranks.
int footrule_distance(const FeatureRanking& user_ranking, const StatedPreferences& prefs);

/// argmin footrule distance over all users, ties to the lowest index.
std::size_t select_proxy(const efm::Model& model, const StatedPreferences& prefs);

struct Recommendation {
  std::string item_id;
  double predicted_rating = 0.0;
  int circles = 0;

  bool operator==(const Recommendation&) const = default;
};

/// Items by predicted rating for `user` descending, ties by item id.
std::vector<Recommendation> recommend(const efm::Model& model, std::size_t user,
                                      std::size_t limit = kDefaultRecommendationLimit);

/// Per-participant state. The proxy is resolved once and pinned.
struct Session {
  std::string session_id;
  StatedPreferences prefs;
  std::size_t proxy_user_index = 0;
  explain::Interactivity interactivity = explain::Interactivity::low;
  explain::Style style = explain::Style::text;
  explain::DialogState dialog;
  std::int64_t created_at = 0;  // ms since epoch

  bool operator==(const Session&) const = default;
};

}  // namespace argrec::personalize
