#include "argrec/personalize.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "argrec/error.hpp"

namespace argrec::personalize {

StatedPreferences::StatedPreferences(std::span<const Feature> ranked) {
  if (ranked.size() != kStatedFeatureCount) {
    throw Error(ErrorCode::validation, "expected exactly 5 ranked features, got " +
                                           std::to_string(ranked.size()));
  }
  std::array<bool, kFeatureCount> seen{};
  for (std::size_t i = 0; i < kStatedFeatureCount; ++i) {
    auto code = feature_code(ranked[i]);
    if (code >= kFeatureCount) throw Error(ErrorCode::validation, "invalid feature code");
    if (seen[code]) {
      throw Error(ErrorCode::validation,
                  "duplicate feature '" + std::string(feature_name(ranked[i])) + "'");
    }
    seen[code] = true;
    ranked_[i] = ranked[i];
  }
}

FeatureRanking rank_features(const std::array<double, kFeatureCount>& attention) {
  FeatureRanking out;
  std::array<std::size_t, kFeatureCount> codes;
  std::iota(codes.begin(), codes.end(), 0);
  std::stable_sort(codes.begin(), codes.end(),
                   [&](std::size_t a, std::size_t b) { return attention[a] > attention[b]; });
  std::transform(codes.begin(), codes.end(), out.begin(), feature_from_code);
  return out;
}

FeatureRanking rank_features_for_user(const efm::Model& model, std::size_t user) {
  return rank_features(model.predict_attention(user));
}

int footrule_distance(const FeatureRanking& user_ranking, const StatedPreferences& prefs) {
  std::array<int, kFeatureCount> position{};
  for (std::size_t r = 0; r < kFeatureCount; ++r) {
    position[feature_code(user_ranking[r])] = static_cast<int>(r) + 1;
  }
  int d = 0;
  const auto& stated = prefs.ranked();
  for (std::size_t r = 0; r < stated.size(); ++r) {
    d += std::abs(static_cast<int>(r) + 1 - position[feature_code(stated[r])]);
  }
  return d;
}

std::size_t select_proxy(const efm::Model& model, const StatedPreferences& prefs) {
  if (!model.trained() || model.user_count() == 0) {
    throw Error(ErrorCode::model_not_trained, "no trained users to select a proxy from");
  }
  std::size_t best = 0;
  int best_d = std::numeric_limits<int>::max();
  for (std::size_t u = 0; u < model.user_count(); ++u) {
    int d = footrule_distance(rank_features_for_user(model, u), prefs);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

std::vector<Recommendation> recommend(const efm::Model& model, std::size_t user,
                                      std::size_t limit) {
  if (!model.trained()) throw Error(ErrorCode::model_not_trained, "model not trained");
  if (limit == 0) throw Error(ErrorCode::validation, "limit must be >= 1");
  std::vector<Recommendation> all;
  all.reserve(model.item_count());
  for (std::size_t i = 0; i < model.item_count(); ++i) {
    double pred = model.predict_rating(user, i);
    all.push_back(Recommendation{model.items().id(i), pred, efm::display_circles(pred)});
  }
  auto cut = std::min(limit, all.size());
  auto order = [](const Recommendation& a, const Recommendation& b) {
    if (a.predicted_rating != b.predicted_rating) return a.predicted_rating > b.predicted_rating;
    return a.item_id < b.item_id;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut), all.end(), order);
  all.resize(cut);
  return all;
}

}  // namespace argrec::personalize
