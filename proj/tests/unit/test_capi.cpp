#include <doctest.h>

#include <fstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "argrec/argrec.h"
#include "support/tempdir.hpp"

using nlohmann::json;

namespace {

const char* kLexicon = ARGREC_DATA_DIR "/lexicon/features.tsv";
const char* kSentiment = ARGREC_DATA_DIR "/lexicon/sentiment.tsv";
const char* kCorpus = ARGREC_DATA_DIR "/corpus/mini_corpus.jsonl";

json take_json(char* s) {
  auto j = json::parse(s);
  argrec_string_free(s);
  return j;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names and null arguments") {
  CHECK(std::string(argrec_status_name(ARGREC_OK)) == "ok");
  CHECK(std::string(argrec_status_name(ARGREC_E_MOVE_NOT_ALLOWED)) == "move_not_allowed");
  CHECK(argrec_classifier_create(nullptr, kSentiment, 1, nullptr) == ARGREC_E_INVALID_ARGUMENT);
  CHECK(std::string(argrec_last_error()).size() > 0);
  CHECK(argrec_model_user_count(nullptr) == 0);
  argrec_classifier_destroy(nullptr);
  argrec_model_destroy(nullptr);
  argrec_server_destroy(nullptr);
  argrec_string_free(nullptr);
}

TEST_CASE("classifier through the C interface") {
  argrec_classifier* c = nullptr;
  REQUIRE(argrec_classifier_create(kLexicon, kSentiment, 0, &c) == ARGREC_OK);
  char* out = nullptr;
  REQUIRE(argrec_classify(c, "The front desk staff were not friendly", &out) == ARGREC_OK);
  auto j = take_json(out);
  CHECK(j["feature"] == "staff");
  CHECK(j["term"] == "front desk staff");
  CHECK(j["polarity"] == "negative");

  REQUIRE(argrec_classifier_report(c, kCorpus, &out) == ARGREC_OK);
  auto report = take_json(out);
  CHECK(report.contains("aspect"));
  CHECK(report.contains("polarity"));
  argrec_classifier_destroy(c);

  CHECK(argrec_classifier_create("/no/such/file", kSentiment, 0, &c) == ARGREC_E_IO);
}

TEST_CASE("ingest, train, save, load, predict, recommend") {
  argrec::testing::TempDir dir;
  auto records = (dir / "records.jsonl").string();
  auto checkpoint = (dir / "model.json").string();

  argrec_classifier* c = nullptr;
  REQUIRE(argrec_classifier_create(kLexicon, kSentiment, 1, &c) == ARGREC_OK);
  size_t n = 0;
  char* summary = nullptr;
  REQUIRE(argrec_ingest(c, kCorpus, records.c_str(), &n, &summary) == ARGREC_OK);
  CHECK(n > 240);
  argrec_string_free(summary);
  argrec_classifier_destroy(c);

  argrec_hyperparams h;
  argrec_hyperparams_default(&h);
  CHECK(h.rank == 5);
  CHECK(h.learning_rate == 0.005);
  h.max_epochs = 30;
  argrec_model* m = nullptr;
  char* report = nullptr;
  REQUIRE(argrec_train(kCorpus, records.c_str(), &h, &m, &report) == ARGREC_OK);
  CHECK(take_json(report)["epochs"].get<int>() <= 30);
  REQUIRE(argrec_model_save(m, checkpoint.c_str()) == ARGREC_OK);
  CHECK(argrec_model_user_count(m) == 40);
  CHECK(argrec_model_item_count(m) == 20);

  argrec_model* loaded = nullptr;
  REQUIRE(argrec_model_load(checkpoint.c_str(), &loaded) == ARGREC_OK);
  double a = 0, b = 0;
  REQUIRE(argrec_model_predict(m, 3, 4, &a) == ARGREC_OK);
  REQUIRE(argrec_model_predict(loaded, 3, 4, &b) == ARGREC_OK);
  CHECK(a == b);
  CHECK(argrec_model_predict(loaded, 400, 0, &b) == ARGREC_E_INDEX);

  const char* prefs[] = {"room", "staff", "price", "location", "comfort"};
  char* out = nullptr;
  REQUIRE(argrec_model_recommend(loaded, prefs, 5, 3, &out) == ARGREC_OK);
  auto recs = take_json(out);
  CHECK(recs["items"].size() == 3);
  CHECK(recs["items"][0]["predicted_rating"] >= recs["items"][1]["predicted_rating"]);
  CHECK(argrec_model_recommend(loaded, prefs, 4, 3, &out) == ARGREC_E_VALIDATION);
  const char* bogus[] = {"room", "staff", "price", "location", "sleep"};
  CHECK(argrec_model_recommend(loaded, bogus, 5, 3, &out) == ARGREC_E_VALIDATION);

  argrec_model_destroy(loaded);
  argrec_model_destroy(m);

  h.rank = 0;
  CHECK(argrec_train(kCorpus, records.c_str(), &h, &m, &report) == ARGREC_E_VALIDATION);
}

TEST_CASE("corrupt or foreign checkpoints are rejected") {
  argrec::testing::TempDir dir;
  auto path = (dir / "bad.json").string();
  {
    std::ofstream out(path);
    out << R"({"version":7})";
  }
  argrec_model* m = nullptr;
  CHECK(argrec_model_load(path.c_str(), &m) == ARGREC_E_CHECKPOINT_VERSION);
  CHECK(m == nullptr);
  {
    std::ofstream out(path);
    out << "garbage";
  }
  CHECK(argrec_model_load(path.c_str(), &m) != ARGREC_OK);
  CHECK(argrec_model_load((dir / "missing.json").c_str(), &m) == ARGREC_E_IO);
}

TEST_CASE("server lifecycle through the C interface") {
  argrec::testing::TempDir dir;
  auto records = (dir / "records.jsonl").string();
  argrec_classifier* c = nullptr;
  REQUIRE(argrec_classifier_create(kLexicon, kSentiment, 1, &c) == ARGREC_OK);
  REQUIRE(argrec_ingest(c, kCorpus, records.c_str(), nullptr, nullptr) == ARGREC_OK);
  argrec_classifier_destroy(c);
  argrec_hyperparams h;
  argrec_hyperparams_default(&h);
  h.max_epochs = 5;
  argrec_model* m = nullptr;
  REQUIRE(argrec_train(kCorpus, records.c_str(), &h, &m, nullptr) == ARGREC_OK);

  argrec_server* s = nullptr;
  REQUIRE(argrec_server_create(m, records.c_str(), (dir / "data").c_str(), 30, 1, &s) == ARGREC_OK);
  argrec_model_destroy(m);  // the server keeps its own reference
  int port = 0;
  REQUIRE(argrec_server_bind(s, "127.0.0.1", 0, &port) == ARGREC_OK);
  CHECK(port > 0);
  argrec_status run_status = ARGREC_E_INTERNAL;
  std::thread t([&] { run_status = argrec_server_run(s); });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  argrec_server_stop(s);
  t.join();
  CHECK(run_status == ARGREC_OK);
  argrec_server_destroy(s);

  CHECK(argrec_server_create(nullptr, records.c_str(), "x", 30, 1, &s) == ARGREC_E_INVALID_ARGUMENT);
}

TEST_CASE("stats through the C interface") {
  argrec::testing::TempDir dir;
  {
    std::ofstream sessions(dir / "sessions.jsonl");
    sessions << R"({"session_id":"s1","preferences":["room","staff","price","comfort","location"],"proxy_user_index":0,"interactivity":"high","style":"text","dialog":{"level":"L1_list","item_id":null,"expanded":false,"feature":null,"term":null},"created_at":0})"
             << "\n";
    std::ofstream events(dir / "events.jsonl");
    events << R"({"session_id":"s1","kind":"more_features","item_id":"h1","timestamp":5,"origin":"server"})" << "\n";
  }
  char* out = nullptr;
  auto status = argrec_stats((dir / "events.jsonl").c_str(), (dir / "sessions.jsonl").c_str(), nullptr, &out);
  REQUIRE_MESSAGE(status == ARGREC_OK, argrec_last_error());
  auto j = take_json(out);
  CHECK(j["usage"]["any_option"]["overall"] == 1.0);
  CHECK(argrec_stats("/no/file", (dir / "sessions.jsonl").c_str(), nullptr, &out) == ARGREC_E_IO);
}

}  // TEST_SUITE
