#include <doctest.h>

#include "argrec/error.hpp"
#include "argrec/explain.hpp"
#include "support/models.hpp"

using namespace argrec;
using namespace argrec::explain;
using corpus::SentenceRecord;

namespace {

SentenceRecord rec(const std::string& review, std::optional<Feature> f, Polarity p,
                   std::optional<std::string> term = {}, const std::string& item = "i000") {
  return SentenceRecord{review, item, "u000", "text of " + review, f, p, std::move(term)};
}

std::vector<SentenceRecord> fixture_records() {
  using P = Polarity;
  std::vector<SentenceRecord> r = {
      rec("s1", Feature::staff, P::positive, "receptionist"),
      rec("s2", Feature::staff, P::negative, "receptionist"),
      rec("s3", Feature::staff, P::positive, "concierge"),
      rec("s4", Feature::staff, P::positive),
      rec("s5", Feature::staff, P::neutral, "concierge"),
      rec("m1", Feature::room, P::positive, "bed"),
      rec("m2", Feature::room, P::negative, "bed"),
      rec("m3", Feature::room, P::negative, "pillow"),
      rec("n1", std::nullopt, P::positive),
      rec("other", Feature::staff, P::negative, "receptionist", "i001"),
  };
  const char* terms[] = {"shower", "towels", "sink", "shower", "towels", "shower", "tiles", "bath"};
  for (int k = 0; k < 8; ++k) {
    r.push_back(rec("b" + std::to_string(k), Feature::bathroom, k == 6 ? P::negative : P::positive, terms[k]));
  }
  return r;
}

// staff > room > price > the rest by code
std::shared_ptr<efm::Model> fixture_model() {
  return testing::model_with_attention({{{4, 3, 5, 0, 0, 0, 0, 0, 0, 0}}}, 3);
}

Viewer viewer(Interactivity i, Style s = Style::table) { return Viewer{0, i, s}; }

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("percentages round half up and complement to 100") {
  struct Case {
    std::uint32_t pos, neg;
    int pct;
  } cases[] = {{3, 1, 75}, {1, 2, 33}, {2, 1, 67}, {1, 7, 13}, {7, 1, 88}, {1, 1, 50}, {0, 4, 0}, {5, 0, 100}, {1, 199, 1}, {1, 200, 0}};
  for (auto c : cases) {
    auto s = make_feature_stat(Feature::room, c.pos, c.neg);
    REQUIRE(s);
    CHECK(s->pct_positive == c.pct);
    CHECK(s->pct_negative == 100 - c.pct);
  }
  CHECK_FALSE(make_feature_stat(Feature::room, 0, 0));
}

TEST_CASE("feature_stats counts polar sentences per feature") {
  auto stats = feature_stats("i000", fixture_records());
  REQUIRE(stats.size() == 3);
  CHECK(stats[0] == FeatureStat{Feature::room, 1, 2, 33, 67});
  CHECK(stats[1] == FeatureStat{Feature::staff, 3, 1, 75, 25});
  CHECK(stats[2] == FeatureStat{Feature::bathroom, 7, 1, 88, 12});
  CHECK(feature_stats("i001", fixture_records()).size() == 1);
  CHECK_THROWS_AS(feature_stats("nope", fixture_records()), Error);
}

TEST_CASE("overview premises follow the proxy's attention") {
  Engine engine(fixture_model(), fixture_records());
  auto p = engine.overview(viewer(Interactivity::high), "i000", false);
  CHECK(p.level == Level::overview);
  REQUIRE(p.claim);
  CHECK(p.claim->predicted_rating == doctest::Approx(3.0));
  CHECK(p.claim->circles == 3);
  CHECK(p.claim->statement_code == "claim.predicted_rating");
  REQUIRE(p.premises.size() == 3);
  CHECK(p.premises[0].feature == Feature::staff);
  CHECK(p.premises[1].feature == Feature::room);
  CHECK(p.premises[2].feature == Feature::price);
  CHECK_FALSE(p.premises[2].stat);
  CHECK(p.available_moves ==
        std::set<MoveKind>{MoveKind::more_features, MoveKind::what_reported, MoveKind::back});

  auto expanded = engine.overview(viewer(Interactivity::high), "i000", true);
  REQUIRE(expanded.premises.size() == 10);
  CHECK(expanded.premises[3].feature == Feature::location);
  CHECK(expanded.premises[9].feature == Feature::checking);

  auto low = engine.overview(viewer(Interactivity::low), "i000", false);
  CHECK(low.available_moves == std::set<MoveKind>{MoveKind::back});
  CHECK_THROWS_AS(engine.overview(viewer(Interactivity::high), "zzz", false), Error);
}

TEST_CASE("feature report: newest excerpts first, capped, with refutation") {
  Engine engine(fixture_model(), fixture_records());
  auto p = engine.feature_report(viewer(Interactivity::high), "i000", Feature::bathroom);
  REQUIRE(p.premises.size() == 1);
  CHECK(p.premises[0].stat->pct_positive == 88);
  CHECK(p.refutation == "refutation.majority_positive");
  REQUIRE(p.backing.size() == 5);
  CHECK(p.backing[0].review_id == "b7");
  CHECK(p.backing[1].review_id == "b5");
  CHECK(p.backing[4].review_id == "b2");
  REQUIRE(p.rebuttal.size() == 1);
  CHECK(p.rebuttal[0].review_id == "b6");
  // shower 3, towels 2, then single mentions lexicographically
  CHECK(p.fine_grained_terms == std::vector<std::string>{"shower", "towels", "bath", "sink", "tiles"});

  auto room = engine.feature_report(viewer(Interactivity::high), "i000", Feature::room);
  CHECK_FALSE(room.refutation);
  CHECK(room.rebuttal.size() == 2);
  CHECK(room.rebuttal[0].review_id == "m3");

  auto none = engine.feature_report(viewer(Interactivity::high), "i000", Feature::price);
  CHECK_FALSE(none.premises[0].stat);
  CHECK(none.backing.empty());
  CHECK(none.fine_grained_terms.empty());

  CHECK_THROWS_AS(engine.feature_report(viewer(Interactivity::low), "i000", Feature::room), Error);
}

TEST_CASE("fine-grained report filters by term") {
  Engine engine(fixture_model(), fixture_records());
  auto p = engine.fine_grained_report(viewer(Interactivity::high), "i000", Feature::staff, "Receptionist");
  CHECK(p.term == "receptionist");
  REQUIRE(p.backing.size() == 1);
  CHECK(p.backing[0].review_id == "s1");
  REQUIRE(p.rebuttal.size() == 1);
  CHECK(p.rebuttal[0].review_id == "s2");
  CHECK(p.available_moves == std::set<MoveKind>{MoveKind::fine_grained, MoveKind::back});
  // neutral mentions count as buttons but produce no excerpts
  auto concierge = engine.fine_grained_report(viewer(Interactivity::high), "i000", Feature::staff, "concierge");
  CHECK(concierge.backing.size() == 1);
  CHECK(concierge.rebuttal.empty());

  try {
    engine.fine_grained_report(viewer(Interactivity::high), "i000", Feature::staff, "bed");
    FAIL("accepted a term from another feature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_such_term);
  }
  CHECK_THROWS_AS(engine.fine_grained_report(viewer(Interactivity::low), "i000", Feature::staff, "concierge"), Error);
}

TEST_CASE("for_state dispatches on the level") {
  Engine engine(fixture_model(), fixture_records());
  auto v = viewer(Interactivity::high);
  CHECK(engine.for_state(v, DialogState{}).level == Level::list);
  CHECK_FALSE(engine.for_state(v, DialogState{}).claim);
  DialogState l4{Level::fine_grained, "i000", false, Feature::room, "bed"};
  CHECK(engine.for_state(v, l4) == engine.fine_grained_report(v, "i000", Feature::room, "bed"));
}

TEST_CASE("text rendering follows the template") {
  Engine engine(fixture_model(), fixture_records());
  auto p = engine.overview(viewer(Interactivity::high, Style::text), "i000", false);
  CHECK(render_text(p) ==
        "We recommend this hotel; guests with preferences like yours would rate it 3 out of 5.\n"
        "Around 75% of guests who wrote about the staff commented positively about it, although "
        "25% expressed complaints. Still, most guests were satisfied with the staff.\n"
        "Around 33% of guests who wrote about the room commented positively about it, although "
        "67% expressed complaints.\n"
        "No guests wrote about the price.");

  auto r = engine.fine_grained_report(viewer(Interactivity::high, Style::text), "i000", Feature::room, "bed");
  auto text = render_text(r);
  CHECK(text.find("Positive comment: \"text of m1\"") != std::string::npos);
  CHECK(text.find("Negative comment: \"text of m2\"") != std::string::npos);

  CHECK(premise_sentence(Premise{Feature::food_and_beverages, FeatureStat{Feature::food_and_beverages, 1, 1, 50, 50}}) ==
        "Around 50% of guests who wrote about the food and beverages commented positively about "
        "it, although 50% expressed complaints.");

  auto table = engine.overview(viewer(Interactivity::high, Style::table), "i000", false);
  try {
    render_text(table);
    FAIL("rendered a table payload as text");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::style_mismatch);
  }
}

TEST_CASE("styles carry identical numbers") {
  Engine engine(fixture_model(), fixture_records());
  auto j_text = to_json(engine.overview(viewer(Interactivity::high, Style::text), "i000", true));
  auto j_bar = to_json(engine.overview(viewer(Interactivity::high, Style::bar_chart), "i000", true));
  CHECK(j_text["premises"] == j_bar["premises"]);
  CHECK(j_text["claim"] == j_bar["claim"]);
  CHECK(j_text.contains("text"));
  CHECK_FALSE(j_bar.contains("text"));
  CHECK(j_bar["premises"][2]["no_data"] == true);
  CHECK(j_bar["available_moves"] == nlohmann::json::array({"what_reported", "back"}));
}

TEST_CASE("engine needs a trained model") {
  CHECK_THROWS_AS(Engine(std::make_shared<efm::Model>(), {}), Error);
}

}  // TEST_SUITE
