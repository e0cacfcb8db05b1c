#include "argrec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "argrec/error.hpp"

namespace argrec::analytics {

using nlohmann::json;

namespace {

double population_variance(std::span<const double> xs) {
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size());
}

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

UsageStats usage_stats(const std::vector<store::Event>& log,
                       const std::vector<personalize::Session>& sessions) {
  std::map<std::string, std::string> high_style;  // session id -> style
  for (const auto& s : sessions) {
    if (s.interactivity == explain::Interactivity::high) {
      high_style[s.session_id] = std::string(explain::style_name(s.style));
    }
  }
  std::map<std::string, std::set<store::EventKind>> used;
  for (const auto& e : log) {
    if (high_style.count(e.session_id) != 0) used[e.session_id].insert(e.kind);
  }

  UsageStats out;
  std::map<std::string, std::map<store::EventKind, std::size_t>> option_counts;
  std::map<std::string, std::size_t> any_counts;
  for (const auto& [id, style] : high_style) {
    ++out.high_sessions[style];
    const auto& kinds = used[id];
    bool any = false;
    for (auto option : kInteractionOptions) {
      if (kinds.count(option) != 0) {
        ++option_counts[style][option];
        any = true;
      }
    }
    if (any) ++any_counts[style];
  }

  std::size_t total = 0;
  std::size_t total_any = 0;
  for (const auto& [style, n] : out.high_sessions) {
    for (auto option : kInteractionOptions) {
      out.option_usage[std::string(store::event_kind_name(option))][style] =
          static_cast<double>(option_counts[style][option]) / static_cast<double>(n);
    }
    out.any_option_by_style[style] =
        static_cast<double>(any_counts[style]) / static_cast<double>(n);
    total += n;
    total_any += any_counts[style];
  }
  if (total > 0) out.any_option_overall = static_cast<double>(total_any) / static_cast<double>(total);
  return out;
}

std::vector<std::string> sessions_using_options(const std::vector<store::Event>& log,
                                                const std::vector<personalize::Session>& sessions) {
  std::set<std::string> high;
  for (const auto& s : sessions) {
    if (s.interactivity == explain::Interactivity::high) high.insert(s.session_id);
  }
  std::set<std::string> users;
  for (const auto& e : log) {
    if (high.count(e.session_id) == 0) continue;
    for (auto option : kInteractionOptions) {
      if (e.kind == option) users.insert(e.session_id);
    }
  }
  return {users.begin(), users.end()};
}

json to_json(const UsageStats& u) {
  json j;
  j["high_sessions"] = u.high_sessions;
  j["options"] = u.option_usage;
  j["any_option"] = {{"by_style", u.any_option_by_style},
                     {"overall", u.any_option_overall ? json(*u.any_option_overall) : json(nullptr)}};
  return j;
}

void QuestionnaireResponse::validate() const {
  for (const auto& [item, score] : item_scores) {
    if (score < 1 || score > 5) {
      throw Error(ErrorCode::validation, "score of '" + item + "' outside 1..5");
    }
  }
  for (const auto& [construct, items] : construct_map) {
    if (items.empty()) throw Error(ErrorCode::validation, "construct '" + construct + "' has no items");
    for (const auto& item : items) {
      if (item_scores.count(item) == 0) {
        throw Error(ErrorCode::validation,
                    "construct '" + construct + "' references unknown item '" + item + "'");
      }
    }
  }
}

QuestionnaireResponse questionnaire_from_json(const json& j) {
  QuestionnaireResponse r;
  try {
    r.session_id = j.at("session_id").get<std::string>();
    r.item_scores = j.at("item_scores").get<std::map<std::string, int>>();
    r.construct_map = j.at("construct_map").get<std::map<std::string, std::vector<std::string>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::validation, std::string("questionnaire: ") + e.what());
  }
  r.validate();
  return r;
}

std::vector<QuestionnaireResponse> read_questionnaires(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<QuestionnaireResponse> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(questionnaire_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return out;
}

double construct_score(const QuestionnaireResponse& r, const std::string& construct) {
  auto it = r.construct_map.find(construct);
  if (it == r.construct_map.end()) {
    throw Error(ErrorCode::unknown_construct, "unknown construct '" + construct + "'");
  }
  double sum = 0.0;
  for (const auto& item : it->second) sum += r.item_scores.at(item);
  return sum / static_cast<double>(it->second.size());
}

double cronbach_alpha(const std::vector<std::vector<double>>& items_by_respondent) {
  auto k = items_by_respondent.size();
  if (k < 2) throw Error(ErrorCode::validation, "cronbach_alpha needs at least 2 items");
  auto n = items_by_respondent.front().size();
  if (n < 2) throw Error(ErrorCode::validation, "cronbach_alpha needs at least 2 respondents");
  std::vector<double> totals(n, 0.0);
  double item_var_sum = 0.0;
  for (const auto& item : items_by_respondent) {
    if (item.size() != n) throw Error(ErrorCode::dimension_mismatch, "ragged score matrix");
    item_var_sum += population_variance(item);
    for (std::size_t j = 0; j < n; ++j) totals[j] += item[j];
  }
  double total_var = population_variance(totals);
  if (total_var == 0.0) throw Error(ErrorCode::degenerate_input, "summed scores have zero variance");
  double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
}

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::empty_input, "mann_whitney_u needs two non-empty samples");
  struct Obs {
    double value;
    bool in_a;
  };
  std::vector<Obs> pooled;
  for (double x : a) pooled.push_back({x, true});
  for (double x : b) pooled.push_back({x, false});
  std::sort(pooled.begin(), pooled.end(), [](const Obs& l, const Obs& r) { return l.value < r.value; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].in_a) rank_sum_a += midrank;
    }
    double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double n = na + nb;
  MannWhitney out;
  out.u = rank_sum_a - na * (na + 1.0) / 2.0;
  double mean = na * nb / 2.0;
  double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (variance <= 0.0) return out;
  double diff = out.u - mean;
  double corrected = std::max(std::abs(diff) - 0.5, 0.0);
  out.z = std::copysign(corrected, diff) / std::sqrt(variance);
  if (corrected == 0.0) out.z = 0.0;
  out.p_two_sided = std::erfc(std::abs(out.z) / std::sqrt(2.0));
  return out;
}

ClassificationReport classification_report(const std::vector<std::string>& gold,
                                           const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::dimension_mismatch, "gold and predicted label counts differ");
  }
  if (gold.empty()) throw Error(ErrorCode::no_gold_labels, "no gold labels");
  std::map<std::string, std::size_t> tp, fp, fn;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) {
      ++tp[gold[i]];
    } else {
      ++fn[gold[i]];
      ++fp[predicted[i]];
    }
  }
  std::set<std::string> classes(gold.begin(), gold.end());
  ClassificationReport report;
  report.n = gold.size();
  for (const auto& c : classes) {
    ClassMetrics m;
    double t = static_cast<double>(tp[c]);
    m.precision = safe_div(t, t + static_cast<double>(fp[c]));
    m.recall = safe_div(t, t + static_cast<double>(fn[c]));
    m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.support = tp[c] + fn[c];
    report.macro_precision += m.precision;
    report.macro_recall += m.recall;
    report.macro_f1 += m.f1;
    report.per_class.emplace(c, m);
  }
  double k = static_cast<double>(classes.size());
  report.macro_precision /= k;
  report.macro_recall /= k;
  report.macro_f1 /= k;
  return report;
}

ClassifierReport classifier_report(const std::vector<corpus::Review>& reviews,
                                   const aspect::Classifier& classifier) {
  std::vector<std::string> gold_aspect, pred_aspect, gold_pol, pred_pol;
  for (const auto& review : reviews) {
    for (const auto& s : review.sentences) {
      if (!s.gold_aspect && !s.gold_polarity) continue;
      auto c = classifier.classify(s);
      if (s.gold_aspect) {
        auto g = parse_feature(*s.gold_aspect);
        if (!g) g = classifier.lexicon().lookup(*s.gold_aspect);
        if (g) {
          gold_aspect.emplace_back(feature_name(*g));
          pred_aspect.emplace_back(c.feature ? std::string(feature_name(*c.feature)) : "none");
        }
      }
      if (s.gold_polarity) {
        gold_pol.emplace_back(polarity_name(*s.gold_polarity));
        pred_pol.emplace_back(polarity_name(c.polarity));
      }
    }
  }
  if (gold_aspect.empty() && gold_pol.empty()) {
    throw Error(ErrorCode::no_gold_labels, "no gold-annotated sentences");
  }
  ClassifierReport out;
  if (!gold_aspect.empty()) out.aspect = classification_report(gold_aspect, pred_aspect);
  if (!gold_pol.empty()) out.polarity = classification_report(gold_pol, pred_pol);
  return out;
}

json to_json(const ClassificationReport& r) {
  json classes = json::object();
  for (const auto& [name, m] : r.per_class) {
    classes[name] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                     {"support", m.support}};
  }
  return json{{"classes", std::move(classes)},
              {"macro", {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}}},
              {"n", r.n}};
}

json stats_report(const std::vector<store::Event>& log,
                  const std::vector<personalize::Session>& sessions,
                  const std::vector<QuestionnaireResponse>& questionnaires) {
  json report;
  report["usage"] = to_json(usage_stats(log, sessions));
  if (questionnaires.empty()) return report;

  std::map<std::string, std::vector<std::string>> construct_items;
  for (const auto& q : questionnaires) {
    for (const auto& [name, items] : q.construct_map) construct_items.emplace(name, items);
  }
  auto users = sessions_using_options(log, sessions);
  std::set<std::string> used(users.begin(), users.end());
  std::set<std::string> high;
  for (const auto& s : sessions) {
    if (s.interactivity == explain::Interactivity::high) high.insert(s.session_id);
  }

  json constructs = json::object();
  for (const auto& [name, items] : construct_items) {
    std::vector<double> scores;
    std::vector<std::vector<double>> matrix(items.size());
    std::vector<double> used_scores, unused_scores;
    for (const auto& q : questionnaires) {
      if (q.construct_map.count(name) == 0) continue;
      double score = construct_score(q, name);
      scores.push_back(score);
      if (high.count(q.session_id) != 0) {
        (used.count(q.session_id) != 0 ? used_scores : unused_scores).push_back(score);
      }
      if (q.construct_map.at(name) == items) {
        for (std::size_t i = 0; i < items.size(); ++i) matrix[i].push_back(q.item_scores.at(items[i]));
      }
    }
    json c;
    c["n"] = scores.size();
    c["mean"] = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    c["cronbach_alpha"] = nullptr;
    if (items.size() >= 2 && matrix.front().size() >= 2) {
      try {
        c["cronbach_alpha"] = cronbach_alpha(matrix);
      } catch (const Error&) {
        // degenerate: leave null
      }
    }
    if (!used_scores.empty() && !unused_scores.empty()) {
      auto mw = mann_whitney_u(used_scores, unused_scores);
      c["used_vs_not_used"] = {{"n_used", used_scores.size()},
                               {"n_not_used", unused_scores.size()},
                               {"U", mw.u},
                               {"U_group", "used"},
                               {"z", mw.z},
                               {"p_two_sided", mw.p_two_sided}};
    }
    constructs[name] = std::move(c);
  }
  report["constructs"] = std::move(constructs);
  return report;
}

}  // namespace argrec::analytics
