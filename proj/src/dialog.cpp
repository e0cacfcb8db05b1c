#include "argrec/dialog.hpp"

#include "argrec/corpus.hpp"
#include "argrec/error.hpp"

namespace argrec::explain {

bool DialogState::valid() const noexcept {
  switch (level) {
    case Level::list:
      return !item_id && !expanded && !feature && !term;
    case Level::overview:
      return item_id.has_value() && !feature && !term;
    case Level::feature_report:
      return item_id.has_value() && feature.has_value() && !term;
    case Level::fine_grained:
      return item_id.has_value() && feature.has_value() && term.has_value() && !term->empty();
  }
  return false;
}

std::string_view interactivity_name(Interactivity i) noexcept {
  return i == Interactivity::low ? "low" : "high";
}

std::optional<Interactivity> parse_interactivity(std::string_view s) noexcept {
  if (s == "low") return Interactivity::low;
  if (s == "high") return Interactivity::high;
  return std::nullopt;
}

std::string_view style_name(Style s) noexcept {
  switch (s) {
    case Style::text: return "text";
    case Style::table: return "table";
    case Style::bar_chart: return "bar_chart";
  }
  return "text";
}

std::optional<Style> parse_style(std::string_view s) noexcept {
  if (s == "text") return Style::text;
  if (s == "table") return Style::table;
  if (s == "bar_chart") return Style::bar_chart;
  return std::nullopt;
}

std::string_view level_name(Level l) noexcept {
  switch (l) {
    case Level::list: return "L1_list";
    case Level::overview: return "L2_overview";
    case Level::feature_report: return "L3_feature_report";
    case Level::fine_grained: return "L4_fine_grained";
  }
  return "L1_list";
}

std::optional<Level> parse_level(std::string_view s) noexcept {
  for (auto l : {Level::list, Level::overview, Level::feature_report, Level::fine_grained}) {
    if (level_name(l) == s) return l;
  }
  return std::nullopt;
}

std::string_view move_kind_name(MoveKind k) noexcept {
  switch (k) {
    case MoveKind::more_why: return "more_why";
    case MoveKind::more_features: return "more_features";
    case MoveKind::what_reported: return "what_reported";
    case MoveKind::fine_grained: return "fine_grained";
    case MoveKind::back: return "back";
  }
  return "back";
}

std::optional<MoveKind> parse_move_kind(std::string_view s) noexcept {
  for (auto k : kAllMoveKinds) {
    if (move_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

std::set<MoveKind> allowed_moves(const DialogState& s, Interactivity i) {
  if (i == Interactivity::low) {
    switch (s.level) {
      case Level::list: return {MoveKind::more_why};
      case Level::overview: return {MoveKind::back};
      default: return {};
    }
  }
  switch (s.level) {
    case Level::list:
      return {MoveKind::more_why};
    case Level::overview:
      if (s.expanded) return {MoveKind::what_reported, MoveKind::back};
      return {MoveKind::more_features, MoveKind::what_reported, MoveKind::back};
    case Level::feature_report:
      return {MoveKind::fine_grained, MoveKind::what_reported, MoveKind::back};
    case Level::fine_grained:
      return {MoveKind::fine_grained, MoveKind::back};
  }
  return {};
}

DialogState apply_move(const DialogState& s, const Move& m, Interactivity i) {
  if (allowed_moves(s, i).count(m.kind) == 0) {
    throw Error(ErrorCode::move_not_allowed,
                std::string(move_kind_name(m.kind)) + " is not allowed at " +
                    std::string(level_name(s.level)) + " under " +
                    std::string(interactivity_name(i)) + " interactivity");
  }
  auto missing = [&](const char* arg) {
    return Error(ErrorCode::validation,
                 std::string(move_kind_name(m.kind)) + " requires '" + arg + "'");
  };

  DialogState next = s;
  switch (m.kind) {
    case MoveKind::more_why:
      if (!m.item_id || m.item_id->empty()) throw missing("item_id");
      next = DialogState{Level::overview, m.item_id, false, std::nullopt, std::nullopt};
      break;
    case MoveKind::more_features:
      next.expanded = true;
      break;
    case MoveKind::what_reported:
      if (!m.feature) throw missing("feature");
      next.level = Level::feature_report;
      next.feature = m.feature;
      next.term.reset();
      break;
    case MoveKind::fine_grained: {
      auto term = m.term ? corpus::normalize_term(*m.term) : std::string();
      if (term.empty()) throw missing("term");
      next.level = Level::fine_grained;
      next.term = std::move(term);
      break;
    }
    case MoveKind::back:
      if (s.level == Level::fine_grained) {
        next.level = Level::feature_report;
        next.term.reset();
      } else if (s.level == Level::feature_report) {
        next.level = Level::overview;
        next.feature.reset();
      } else {
        next = DialogState{};
      }
      break;
  }
  return next;
}

}  // namespace argrec::explain
