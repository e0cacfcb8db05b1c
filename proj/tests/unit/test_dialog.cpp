#include <doctest.h>

#include "argrec/dialog.hpp"
#include "argrec/error.hpp"

using namespace argrec;
using namespace argrec::explain;

namespace {

ErrorCode code_of(const DialogState& s, const Move& m, Interactivity i) {
  try {
    apply_move(s, m, i);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("move was accepted");
  return ErrorCode::io;
}

}  // namespace

TEST_SUITE("dialog") {

TEST_CASE("a full high-interactivity walk") {
  auto hi = Interactivity::high;
  DialogState s;
  CHECK(s.valid());
  s = apply_move(s, Move::more_why("h1"), hi);
  CHECK(s == DialogState{Level::overview, "h1", false, {}, {}});
  s = apply_move(s, Move::more_features(), hi);
  CHECK(s.expanded);
  CHECK(allowed_moves(s, hi) == std::set<MoveKind>{MoveKind::what_reported, MoveKind::back});
  s = apply_move(s, Move::what_reported(Feature::room), hi);
  CHECK(s.level == Level::feature_report);
  CHECK(s.feature == Feature::room);
  s = apply_move(s, Move::what_reported(Feature::staff), hi);
  CHECK(s.feature == Feature::staff);
  s = apply_move(s, Move::fine_grained("  Front Desk Staff"), hi);
  CHECK(s.level == Level::fine_grained);
  CHECK(s.term == "front desk staff");
  s = apply_move(s, Move::fine_grained("receptionist"), hi);
  CHECK(s.term == "receptionist");
  CHECK(s.valid());
  s = apply_move(s, Move::back(), hi);
  CHECK(s.level == Level::feature_report);
  CHECK_FALSE(s.term);
  s = apply_move(s, Move::back(), hi);
  CHECK(s.level == Level::overview);
  CHECK_FALSE(s.feature);
  s = apply_move(s, Move::back(), hi);
  CHECK(s == DialogState{});
}

TEST_CASE("low interactivity offers only the first request and back") {
  auto lo = Interactivity::low;
  DialogState s;
  CHECK(allowed_moves(s, lo) == std::set<MoveKind>{MoveKind::more_why});
  s = apply_move(s, Move::more_why("h1"), lo);
  CHECK(allowed_moves(s, lo) == std::set<MoveKind>{MoveKind::back});
  CHECK(code_of(s, Move::more_features(), lo) == ErrorCode::move_not_allowed);
  CHECK(code_of(s, Move::what_reported(Feature::room), lo) == ErrorCode::move_not_allowed);
  CHECK(code_of(s, Move::fine_grained("bed"), lo) == ErrorCode::move_not_allowed);
  CHECK(apply_move(s, Move::back(), lo) == DialogState{});
}

TEST_CASE("disallowed moves are rejected before arguments are checked") {
  auto hi = Interactivity::high;
  DialogState list;
  CHECK(code_of(list, Move::back(), hi) == ErrorCode::move_not_allowed);
  CHECK(code_of(list, Move{MoveKind::fine_grained, {}, {}, {}}, hi) == ErrorCode::move_not_allowed);
  CHECK(code_of(list, Move{MoveKind::more_why, {}, {}, {}}, hi) == ErrorCode::validation);
  DialogState overview{Level::overview, "h1", false, {}, {}};
  CHECK(code_of(overview, Move{MoveKind::what_reported, {}, {}, {}}, hi) == ErrorCode::validation);
  CHECK(code_of(overview, Move::more_why("h2"), hi) == ErrorCode::move_not_allowed);
  DialogState report{Level::feature_report, "h1", false, Feature::room, {}};
  CHECK(code_of(report, Move::fine_grained(" ,, "), hi) == ErrorCode::validation);
  CHECK(code_of(report, Move::more_features(), hi) == ErrorCode::move_not_allowed);
}

TEST_CASE("state validity tracks field presence") {
  CHECK_FALSE(DialogState{Level::list, "h1", false, {}, {}}.valid());
  CHECK_FALSE(DialogState{Level::overview, {}, false, {}, {}}.valid());
  CHECK_FALSE(DialogState{Level::feature_report, "h1", false, {}, {}}.valid());
  CHECK_FALSE(DialogState{Level::fine_grained, "h1", false, Feature::room, {}}.valid());
  CHECK(DialogState{Level::fine_grained, "h1", false, Feature::room, "bed"}.valid());
}

TEST_CASE("names round-trip") {
  for (auto k : kAllMoveKinds) CHECK(parse_move_kind(move_kind_name(k)) == k);
  for (auto l : {Level::list, Level::overview, Level::feature_report, Level::fine_grained})
    CHECK(parse_level(level_name(l)) == l);
  CHECK(level_name(Level::feature_report) == "L3_feature_report");
  CHECK(parse_style("bar_chart") == Style::bar_chart);
  CHECK(parse_interactivity("high") == Interactivity::high);
  CHECK_FALSE(parse_interactivity("medium"));
}

}  // TEST_SUITE
