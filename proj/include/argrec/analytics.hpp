#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "argrec/aspect.hpp"
#include "argrec/corpus.hpp"
#include "argrec/personalize.hpp"
#include "argrec/store.hpp"

namespace argrec::analytics {

/// Interaction options offered beyond the initial "more on why" request.
inline constexpr store::EventKind kInteractionOptions[] = {
    store::EventKind::more_features, store::EventKind::what_reported,
    store::EventKind::fine_grained};

/// Fractions of high-interactivity sessions that used an option at least
/// once. Styles without high sessions have no entries.
struct UsageStats {
  std::map<std::string, std::size_t> high_sessions;                   // style -> count
  std::map<std::string, std::map<std::string, double>> option_usage;  // option -> style -> fraction
  std::map<std::string, double> any_option_by_style;
  std::optional<double> any_option_overall;
};

UsageStats usage_stats(const std::vector<store::Event>& log,
                       const std::vector<personalize::Session>& sessions);
nlohmann::json to_json(const UsageStats& u);

/// Session ids of high-interactivity sessions with at least one option used.
std::vector<std::string> sessions_using_options(const std::vector<store::Event>& log,
                                                const std::vector<personalize::Session>& sessions);

struct QuestionnaireResponse {
  std::string session_id;
  std::map<std::string, int> item_scores;                         // 1..5
  std::map<std::string, std::vector<std::string>> construct_map;  // construct -> item ids

  /// Throws validation Error on out-of-range scores or dangling item ids.
  void validate() const;
};

QuestionnaireResponse questionnaire_from_json(const nlohmann::json& j);
std::vector<QuestionnaireResponse> read_questionnaires(const std::filesystem::path& path);

/// Mean of the construct's item scores.
double construct_score(const QuestionnaireResponse& r, const std::string& construct);

/// items_by_respondent[i][j]: score of item i by respondent j. Population
/// variances. Throws degenerate_input when the summed scores do not vary.
double cronbach_alpha(const std::vector<std::vector<double>>& items_by_respondent);

struct MannWhitney {
  double u = 0.0;  // for group a
  double z = 0.0;
  double p_two_sided = 1.0;
};

/// Midrank U for group a, normal approximation with tie and continuity
/// corrections. Unreliable for very small samples.
MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  std::map<std::string, ClassMetrics> per_class;  // classes present in gold
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::size_t n = 0;
};

ClassificationReport classification_report(const std::vector<std::string>& gold,
                                           const std::vector<std::string>& predicted);

struct ClassifierReport {
  std::optional<ClassificationReport> aspect;
  std::optional<ClassificationReport> polarity;
};

/// Scores the classifier on the gold-annotated sentences of the reviews.
/// Throws no_gold_labels when no sentence carries a usable gold label.
ClassifierReport classifier_report(const std::vector<corpus::Review>& reviews,
                                   const aspect::Classifier& classifier);
nlohmann::json to_json(const ClassificationReport& r);

/// The `stats` report: usage fractions, and when questionnaires are given,
/// construct means, reliabilities and used-vs-not-used comparisons.
nlohmann::json stats_report(const std::vector<store::Event>& log,
                            const std::vector<personalize::Session>& sessions,
                            const std::vector<QuestionnaireResponse>& questionnaires);

}  // namespace argrec::analytics
