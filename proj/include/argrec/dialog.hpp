#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "argrec/types.hpp"

// Explanation dialog: the system makes argumentation attempts at four levels
// of detail, the user moves between them with argument requests.
namespace argrec::explain {

enum class Interactivity { low, high };
enum class Style { text, table, bar_chart };

/// L1 recommendation list, L2 overview of one hotel, L3 report on one
/// feature, L4 statements on one fine-grained term.
enum class Level { list, overview, feature_report, fine_grained };

enum class MoveKind { more_why, more_features, what_reported, fine_grained, back };

inline constexpr MoveKind kAllMoveKinds[] = {MoveKind::more_why, MoveKind::more_features,
                                             MoveKind::what_reported, MoveKind::fine_grained,
                                             MoveKind::back};

struct DialogState {
  Level level = Level::list;
  std::optional<std::string> item_id;
  bool expanded = false;
  std::optional<Feature> feature;
  std::optional<std::string> term;

  /// Field presence matches the level.
  bool valid() const noexcept;
  bool operator==(const DialogState&) const = default;
};

struct Move {
  MoveKind kind = MoveKind::back;
  std::optional<std::string> item_id;  // more_why
  std::optional<Feature> feature;      // what_reported
  std::optional<std::string> term;     // fine_grained

  static Move more_why(std::string item) { return {MoveKind::more_why, std::move(item), {}, {}}; }
  static Move more_features() { return {MoveKind::more_features, {}, {}, {}}; }
  static Move what_reported(Feature f) { return {MoveKind::what_reported, {}, f, {}}; }
  static Move fine_grained(std::string t) { return {MoveKind::fine_grained, {}, {}, std::move(t)}; }
  static Move back() { return {MoveKind::back, {}, {}, {}}; }
};

std::string_view interactivity_name(Interactivity i) noexcept;
std::optional<Interactivity> parse_interactivity(std::string_view s) noexcept;
std::string_view style_name(Style s) noexcept;
std::optional<Style> parse_style(std::string_view s) noexcept;
std::string_view level_name(Level l) noexcept;
std::optional<Level> parse_level(std::string_view s) noexcept;
std::string_view move_kind_name(MoveKind k) noexcept;
std::optional<MoveKind> parse_move_kind(std::string_view s) noexcept;

std::set<MoveKind> allowed_moves(const DialogState& s, Interactivity i);

/// Successor state. Throws move_not_allowed when the move is not in
/// allowed_moves(s, i) and validation when its argument is missing.
DialogState apply_move(const DialogState& s, const Move& m, Interactivity i);

}  // namespace argrec::explain
