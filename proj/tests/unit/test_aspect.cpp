#include <doctest.h>

#include <sstream>

#include "argrec/aspect.hpp"
#include "argrec/corpus.hpp"
#include "argrec/error.hpp"

using namespace argrec;
using namespace argrec::aspect;

namespace {

corpus::FineGrainedLexicon small_lexicon() {
  corpus::FineGrainedLexicon lex;
  lex.add("bed", Feature::room);
  lex.add("bedding", Feature::room);
  lex.add("staff", Feature::staff);
  lex.add("front desk staff", Feature::staff);
  lex.add("breakfast", Feature::food_and_beverages);
  lex.add("price", Feature::price);
  lex.add("shower", Feature::bathroom);
  return lex;
}

SentimentLexicon small_sentiment() {
  std::istringstream in("great\tpositive\nclean\tpositive\nrude\tnegative\ndirty\tnegative\nnot\tnegation\nnever\tnegation\n");
  return SentimentLexicon::parse(in);
}

Classifier rules() { return Classifier(Mode::lexicon_rule, small_lexicon(), small_sentiment()); }
Classifier gold() { return Classifier(Mode::gold_passthrough, small_lexicon(), small_sentiment()); }

}  // namespace

TEST_SUITE("aspect") {

TEST_CASE("longest lexicon match wins") {
  auto c = rules();
  auto m = c.classify_aspect("The front desk staff were great.");
  CHECK(m.feature == Feature::staff);
  CHECK(m.term == "front desk staff");
  CHECK(c.classify_aspect("The bedding was clean").term == "bedding");
  CHECK_FALSE(c.classify_aspect("We arrived late").feature);
}

TEST_CASE("equal-length matches go to the lowest feature code, then earliest") {
  auto c = rules();
  // price (1) beats breakfast (7) whatever the order
  CHECK(c.classify_aspect("breakfast was worth the price").feature == Feature::price);
  CHECK(c.classify_aspect("the price included breakfast").feature == Feature::price);
  // two room terms of equal length: the earlier one
  CHECK(c.classify_aspect("bed then bed").term == "bed");
  auto both = c.classify_aspect("the shower and the bed");
  CHECK(both.feature == Feature::room);
}

TEST_CASE("polarity counts sentiment terms with negation window of three") {
  auto c = rules();
  CHECK(c.classify_polarity("The room was great") == Polarity::positive);
  CHECK(c.classify_polarity("The room was not great") == Polarity::negative);
  CHECK(c.classify_polarity("not room was great") == Polarity::negative);     // 3 tokens back
  CHECK(c.classify_polarity("not the room was great") == Polarity::positive);  // 4 back
  CHECK(c.classify_polarity("great staff but dirty room") == Polarity::neutral);
  CHECK(c.classify_polarity("great clean but dirty") == Polarity::positive);
  CHECK(c.classify_polarity("we arrived at noon") == Polarity::neutral);
  CHECK(c.classify_polarity("never rude") == Polarity::positive);
}

TEST_CASE("sentiment lexicon rejects malformed input") {
  std::istringstream multi("very good\tpositive\n");
  CHECK_THROWS_AS(SentimentLexicon::parse(multi), FormatError);
  std::istringstream dup("good\tpositive\ngood\tnegative\n");
  CHECK_THROWS_AS(SentimentLexicon::parse(dup), FormatError);
  std::istringstream label("good\tnice\n");
  CHECK_THROWS_AS(SentimentLexicon::parse(label), FormatError);
}

TEST_CASE("bundled sentiment lexicon loads") {
  auto s = SentimentLexicon::load(ARGREC_DATA_DIR "/lexicon/sentiment.tsv");
  CHECK(s.terms.at("loved") == Polarity::positive);
  CHECK(s.negations.count("not") == 1);
}

TEST_CASE("rule mode ignores gold annotations") {
  auto c = rules();
  corpus::RawSentence s{"The bed was not clean", std::string("staff"), Polarity::positive};
  auto out = c.classify(s);
  CHECK(out.feature == Feature::room);
  CHECK(out.term == "bed");
  CHECK(out.polarity == Polarity::negative);
}

TEST_CASE("passthrough mode prefers gold labels") {
  auto c = gold();
  SUBCASE("fine-grained gold aspect present in text") {
    auto out = c.classify({"Loved the bedding", std::string("bedding"), Polarity::positive});
    CHECK(out.feature == Feature::room);
    CHECK(out.term == "bedding");
    CHECK(out.polarity == Polarity::positive);
  }
  SUBCASE("general gold aspect keeps the matching rule term") {
    auto out = c.classify({"The bed was dirty", std::string("room"), std::nullopt});
    CHECK(out.feature == Feature::room);
    CHECK(out.term == "bed");
    CHECK(out.polarity == Polarity::negative);
  }
  SUBCASE("gold feature differing from the rule drops the rule term") {
    auto out = c.classify({"The bed was dirty", std::string("staff"), Polarity::negative});
    CHECK(out.feature == Feature::staff);
    CHECK_FALSE(out.term);
  }
  SUBCASE("unmappable gold aspect falls back to the rules") {
    auto out = c.classify({"The shower was great", std::string("elevator"), std::nullopt});
    CHECK(out.feature == Feature::bathroom);
    CHECK(out.term == "shower");
  }
  SUBCASE("gold polarity without an aspect") {
    auto out = c.classify({"We came by train", std::nullopt, Polarity::neutral});
    CHECK_FALSE(out.feature);
    CHECK(out.polarity == Polarity::neutral);
  }
}

TEST_CASE("sentence records carry ids and decisions") {
  corpus::Review r{"r1", "h1", "u1", 5,
                   {{"Great staff", std::nullopt, std::nullopt}, {"We came by train", std::nullopt, std::nullopt}}};
  auto records = corpus::build_sentence_records({r}, rules());
  REQUIRE(records.size() == 2);
  CHECK(records[0].feature == Feature::staff);
  CHECK(records[0].polarity == Polarity::positive);
  CHECK(records[0].fine_grained_term == "staff");
  CHECK(records[0].review_id == "r1");
  CHECK_FALSE(records[1].feature);
}

}  // TEST_SUITE
