#include "argrec/explain.hpp"

#include <algorithm>
#include <sstream>

#include "argrec/error.hpp"

namespace argrec::explain {

using nlohmann::json;

std::optional<FeatureStat> make_feature_stat(Feature f, std::uint32_t pos, std::uint32_t neg) {
  std::uint64_t total = static_cast<std::uint64_t>(pos) + neg;
  if (total == 0) return std::nullopt;
  // round_half_up(100 * pos / total) in integers
  auto pct = static_cast<int>((200 * static_cast<std::uint64_t>(pos) + total) / (2 * total));
  return FeatureStat{f, pos, neg, pct, 100 - pct};
}

std::vector<FeatureStat> feature_stats(const std::string& item_id,
                                       const std::vector<corpus::SentenceRecord>& records) {
  std::array<std::uint32_t, kFeatureCount> pos{};
  std::array<std::uint32_t, kFeatureCount> neg{};
  bool seen = false;
  for (const auto& r : records) {
    if (r.item_id != item_id) continue;
    seen = true;
    if (!r.feature) continue;
    if (r.polarity == Polarity::positive) ++pos[feature_code(*r.feature)];
    if (r.polarity == Polarity::negative) ++neg[feature_code(*r.feature)];
  }
  if (!seen) throw Error(ErrorCode::unknown_item, "unknown item '" + item_id + "'");
  std::vector<FeatureStat> out;
  for (auto f : kAllFeatures) {
    if (auto s = make_feature_stat(f, pos[feature_code(f)], neg[feature_code(f)])) out.push_back(*s);
  }
  return out;
}

Engine::Engine(std::shared_ptr<const efm::Model> model, std::vector<corpus::SentenceRecord> records)
    : model_(std::move(model)), records_(std::move(records)) {
  if (!model_ || !model_->trained()) throw Error(ErrorCode::model_not_trained, "model not trained");
  for (std::size_t i = 0; i < records_.size(); ++i) by_item_[records_[i].item_id].push_back(i);
}

bool Engine::has_item(const std::string& item_id) const {
  return model_->items().find(item_id).has_value();
}

const std::vector<std::size_t>& Engine::item_records(const std::string& item_id) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_item_.find(item_id);
  return it == by_item_.end() ? kNone : it->second;
}

std::size_t Engine::item_index(const std::string& item_id) const {
  auto index = model_->items().find(item_id);
  if (!index) throw Error(ErrorCode::unknown_item, "unknown item '" + item_id + "'");
  return *index;
}

Claim Engine::claim_for(const Viewer& v, std::size_t item) const {
  double pred = model_->predict_rating(v.proxy_user, item);
  return Claim{pred, efm::display_circles(pred), std::string(kClaimStatement)};
}

std::optional<FeatureStat> Engine::stat_for(const std::string& item_id, Feature f) const {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  for (auto idx : item_records(item_id)) {
    const auto& r = records_[idx];
    if (r.feature != f) continue;
    if (r.polarity == Polarity::positive) ++pos;
    if (r.polarity == Polarity::negative) ++neg;
  }
  return make_feature_stat(f, pos, neg);
}

ExplanationPayload Engine::base(const Viewer& v, Level level, const std::string& item_id) const {
  ExplanationPayload p;
  p.level = level;
  p.item_id = item_id;
  p.claim = claim_for(v, item_index(item_id));
  p.style = v.style;
  return p;
}

ExplanationPayload Engine::list_view(const Viewer& v) const {
  ExplanationPayload p;
  p.style = v.style;
  p.available_moves = allowed_moves(DialogState{}, v.interactivity);
  return p;
}

ExplanationPayload Engine::overview(const Viewer& v, const std::string& item_id,
                                    bool expanded) const {
  auto p = base(v, Level::overview, item_id);
  p.expanded = expanded;
  auto ranking = personalize::rank_features_for_user(*model_, v.proxy_user);
  std::size_t shown = expanded ? kFeatureCount : kCollapsedPremises;
  for (std::size_t i = 0; i < shown; ++i) {
    p.premises.push_back(Premise{ranking[i], stat_for(item_id, ranking[i])});
  }
  DialogState state{Level::overview, item_id, expanded, std::nullopt, std::nullopt};
  p.available_moves = allowed_moves(state, v.interactivity);
  return p;
}

ExplanationPayload Engine::feature_report(const Viewer& v, const std::string& item_id,
                                          Feature feature) const {
  if (v.interactivity == Interactivity::low) {
    throw Error(ErrorCode::move_not_allowed, "feature reports require high interactivity");
  }
  auto p = base(v, Level::feature_report, item_id);
  p.feature = feature;
  auto stat = stat_for(item_id, feature);
  p.premises.push_back(Premise{feature, stat});
  if (stat && stat->pct_positive >= 50) p.refutation = std::string(kRefutationStatement);

  const auto& idx = item_records(item_id);
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    const auto& r = records_[*it];
    if (r.feature != feature) continue;
    if (r.polarity == Polarity::positive && p.backing.size() < kMaxBacking) {
      p.backing.push_back(Excerpt{r.text, r.review_id, r.polarity});
    } else if (r.polarity == Polarity::negative && p.rebuttal.size() < kMaxRebuttal) {
      p.rebuttal.push_back(Excerpt{r.text, r.review_id, r.polarity});
    }
  }
  p.fine_grained_terms = term_buttons(item_id, feature);
  DialogState state{Level::feature_report, item_id, false, feature, std::nullopt};
  p.available_moves = allowed_moves(state, v.interactivity);
  return p;
}

ExplanationPayload Engine::fine_grained_report(const Viewer& v, const std::string& item_id,
                                               Feature feature, const std::string& term) const {
  if (v.interactivity == Interactivity::low) {
    throw Error(ErrorCode::move_not_allowed, "fine-grained reports require high interactivity");
  }
  auto key = corpus::normalize_term(term);
  if (key.empty()) throw Error(ErrorCode::validation, "empty term");
  auto p = base(v, Level::fine_grained, item_id);
  if (!has_term(item_id, feature, key)) {
    throw Error(ErrorCode::no_such_term, "no statements on '" + key + "' for " +
                                             std::string(feature_name(feature)) + " of '" +
                                             item_id + "'");
  }
  p.feature = feature;
  p.term = key;
  auto stat = stat_for(item_id, feature);
  p.premises.push_back(Premise{feature, stat});
  if (stat && stat->pct_positive >= 50) p.refutation = std::string(kRefutationStatement);

  const auto& idx = item_records(item_id);
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    const auto& r = records_[*it];
    if (r.feature != feature || !r.fine_grained_term ||
        corpus::normalize_term(*r.fine_grained_term) != key) {
      continue;
    }
    if (r.polarity == Polarity::positive) p.backing.push_back(Excerpt{r.text, r.review_id, r.polarity});
    if (r.polarity == Polarity::negative) p.rebuttal.push_back(Excerpt{r.text, r.review_id, r.polarity});
  }
  p.fine_grained_terms = term_buttons(item_id, feature);
  DialogState state{Level::fine_grained, item_id, false, feature, key};
  p.available_moves = allowed_moves(state, v.interactivity);
  return p;
}

ExplanationPayload Engine::for_state(const Viewer& v, const DialogState& s) const {
  switch (s.level) {
    case Level::list:
      return list_view(v);
    case Level::overview:
      return overview(v, *s.item_id, s.expanded);
    case Level::feature_report:
      return feature_report(v, *s.item_id, *s.feature);
    case Level::fine_grained:
      return fine_grained_report(v, *s.item_id, *s.feature, *s.term);
  }
  return list_view(v);
}

std::vector<std::string> Engine::term_buttons(const std::string& item_id, Feature feature) const {
  std::map<std::string, std::size_t> freq;
  for (auto idx : item_records(item_id)) {
    const auto& r = records_[idx];
    if (r.feature == feature && r.fine_grained_term) {
      ++freq[corpus::normalize_term(*r.fine_grained_term)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < kMaxTermButtons; ++i) {
    out.push_back(ranked[i].first);
  }
  return out;
}

bool Engine::has_term(const std::string& item_id, Feature feature, const std::string& term) const {
  auto key = corpus::normalize_term(term);
  for (auto idx : item_records(item_id)) {
    const auto& r = records_[idx];
    if (r.feature == feature && r.fine_grained_term &&
        corpus::normalize_term(*r.fine_grained_term) == key) {
      return true;
    }
  }
  return false;
}

std::string premise_sentence(const Premise& p) {
  auto label = feature_label(p.feature);
  std::ostringstream out;
  if (!p.stat) {
    out << "No guests wrote about the " << label << ".";
    return out.str();
  }
  out << "Around " << p.stat->pct_positive << "% of guests who wrote about the " << label
      << " commented positively about it, although " << p.stat->pct_negative
      << "% expressed complaints.";
  return out.str();
}

std::string render_text(const ExplanationPayload& p) {
  if (p.style != Style::text) {
    throw Error(ErrorCode::style_mismatch,
                "render_text called on a " + std::string(style_name(p.style)) + " payload");
  }
  std::ostringstream out;
  if (!p.claim) {
    out << "Choose \"More on why recommended\" on a hotel to see why it was recommended.";
    return out.str();
  }
  out << "We recommend this hotel; guests with preferences like yours would rate it "
      << p.claim->circles << " out of 5.";
  for (const auto& premise : p.premises) {
    out << '\n' << premise_sentence(premise);
    if (premise.stat && premise.stat->pct_positive >= 50) {
      out << " Still, most guests were satisfied with the " << feature_label(premise.feature)
          << ".";
    }
  }
  for (const auto& e : p.backing) out << "\nPositive comment: \"" << e.text << "\"";
  for (const auto& e : p.rebuttal) out << "\nNegative comment: \"" << e.text << "\"";
  return out.str();
}

json to_json(const ExplanationPayload& p) {
  auto excerpts = [](const std::vector<Excerpt>& list) {
    json arr = json::array();
    for (const auto& e : list) arr.push_back({{"text", e.text}, {"review_id", e.review_id}});
    return arr;
  };
  json j;
  j["level"] = std::string(level_name(p.level));
  j["style"] = std::string(style_name(p.style));
  j["item_id"] = p.item_id ? json(*p.item_id) : json(nullptr);
  if (p.claim) {
    j["claim"] = {{"statement", p.claim->statement_code},
                  {"predicted_rating", p.claim->predicted_rating},
                  {"circles", p.claim->circles}};
  }
  json premises = json::array();
  for (const auto& premise : p.premises) {
    json jp = {{"feature", std::string(feature_name(premise.feature))}};
    if (premise.stat) {
      jp["pct_positive"] = premise.stat->pct_positive;
      jp["pct_negative"] = premise.stat->pct_negative;
      jp["pos_count"] = premise.stat->pos_count;
      jp["neg_count"] = premise.stat->neg_count;
    } else {
      jp["no_data"] = true;
    }
    premises.push_back(std::move(jp));
  }
  j["premises"] = std::move(premises);
  j["backing"] = excerpts(p.backing);
  j["rebuttal"] = excerpts(p.rebuttal);
  if (p.refutation) j["refutation"] = *p.refutation;
  if (p.feature) j["feature"] = std::string(feature_name(*p.feature));
  if (p.term) j["term"] = *p.term;
  if (p.level == Level::feature_report || p.level == Level::fine_grained) {
    j["fine_grained_terms"] = p.fine_grained_terms;
  }
  j["expanded"] = p.expanded;
  json moves = json::array();
  for (auto k : p.available_moves) moves.push_back(std::string(move_kind_name(k)));
  j["available_moves"] = std::move(moves);
  if (p.style == Style::text) j["text"] = render_text(p);
  return j;
}

}  // namespace argrec::explain
