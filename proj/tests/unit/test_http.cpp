#include <doctest.h>

#include <thread>

#include "argrec/service.hpp"
#include "support/models.hpp"
#include "support/tempdir.hpp"

#include <httplib.h>

using namespace argrec;
using nlohmann::json;

namespace {

std::vector<corpus::SentenceRecord> records() {
  auto r = [](const char* review, const char* item, Feature f, Polarity p, const char* term) {
    return corpus::SentenceRecord{review, item, "u000", review, f, p, std::string(term)};
  };
  return {r("a", "i000", Feature::room, Polarity::positive, "bed"),
          r("b", "i000", Feature::room, Polarity::negative, "bed"),
          r("c", "i001", Feature::staff, Polarity::positive, "receptionist")};
}

// Service plus a listening server on an ephemeral port.
struct Running {
  testing::TempDir dir;
  service::Service svc;
  service::HttpServer http;
  int port;
  std::thread thread;
  httplib::Client client;

  Running()
      : svc(testing::model_with_attention({{{3, 1, 2, 0, 0, 0, 0, 0, 0, 0}}}, 2), records(),
            service::Config{dir.path()}),
        http(svc),
        port(http.bind("127.0.0.1", 0)),
        thread([this] { http.serve(); }),
        client("127.0.0.1", port) {
    for (int k = 0; k < 200 && !client.Get("/health"); ++k) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Running() {
    http.stop();
    thread.join();
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client.Post(path, body.dump(), "application/json");
  }
  std::string session(const char* interactivity) {
    auto res = post("/sessions", {{"preferences", {"room", "staff", "price", "comfort", "location"}},
                                  {"interactivity", interactivity},
                                  {"style", "table"}});
    REQUIRE(res);
    REQUIRE(res->status == 201);
    return json::parse(res->body)["session_id"];
  }
};

}  // namespace

TEST_SUITE("http") {

TEST_CASE("health and session lifecycle") {
  Running r;
  auto health = r.client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["items"] == 2);

  auto id = r.session("high");
  auto got = r.client.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(got->status == 200);
  auto s = json::parse(got->body);
  CHECK(s["interactivity"] == "high");
  CHECK(s["proxy_user_id"] == "u000");
  CHECK(s["dialog"]["level"] == "L1_list");

  auto recs = r.client.Get("/sessions/" + id + "/recommendations?limit=1");
  REQUIRE(recs);
  CHECK(json::parse(recs->body)["items"].size() == 1);
  CHECK(r.client.Get("/sessions/" + id + "/recommendations?limit=0")->status == 400);
  CHECK(r.client.Get("/sessions/" + id + "/recommendations?limit=abc")->status == 400);
  CHECK(r.client.Get("/sessions/nope")->status == 404);
}

TEST_CASE("explanation dialog over HTTP") {
  Running r;
  auto id = r.session("high");
  auto path = "/sessions/" + id + "/explanation";
  auto res = r.post(path, {{"move", "more_why"}, {"item_id", "i000"}});
  REQUIRE(res);
  CHECK(res->status == 200);
  auto p = json::parse(res->body);
  CHECK(p["level"] == "L2_overview");
  CHECK(p["premises"][0]["feature"] == "room");
  CHECK(p["premises"][0]["pct_positive"] == 50);
  CHECK(p["available_moves"] == json::array({"more_features", "what_reported", "back"}));

  res = r.post(path, {{"move", "what_reported"}, {"feature", "room"}});
  p = json::parse(res->body);
  CHECK(p["level"] == "L3_feature_report");
  CHECK(p["fine_grained_terms"] == json::array({"bed"}));
  CHECK(p["refutation"] == "refutation.majority_positive");

  res = r.post(path, {{"move", "fine_grained"}, {"term", "bed"}});
  CHECK(json::parse(res->body)["term"] == "bed");

  CHECK(r.post(path, {{"move", "more_why"}, {"item_id", "i001"}})->status == 403);
  auto bad = r.post(path, {{"move", "warp"}});
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body)["error"] == "validation_error");
  CHECK(r.client.Post(path, "{not json", "application/json")->status == 400);
  CHECK(r.post(path, {{"move", "fine_grained"}, {"term", "towels"}})->status == 400);
  CHECK(r.post("/sessions/s999/explanation", {{"move", "back"}})->status == 404);
}

TEST_CASE("low interactivity rejects deep requests with 403") {
  Running r;
  auto id = r.session("low");
  auto path = "/sessions/" + id + "/explanation";
  CHECK(r.post(path, {{"move", "more_why"}, {"item_id", "i000"}})->status == 200);
  auto res = r.post(path, {{"move", "what_reported"}, {"feature", "room"}});
  CHECK(res->status == 403);
  CHECK(json::parse(res->body)["error"] == "move_not_allowed");
  CHECK(r.post(path, {{"move", "more_features"}})->status == 403);
  CHECK(r.post(path, {{"move", "back"}})->status == 200);
}

TEST_CASE("events endpoint and usage") {
  Running r;
  auto id = r.session("high");
  auto events = "/sessions/" + id + "/events";
  CHECK(r.post(events, {{"kind", "view_list"}})->status == 204);
  CHECK(r.post(events, {{"kind", "what_reported"}, {"item_id", "i000"}, {"feature", "room"}})->status == 204);
  CHECK(r.post(events, {{"kind", "what_reported"}})->status == 400);
  CHECK(r.post("/sessions/s999/events", {{"kind", "view_list"}})->status == 404);
  auto usage = json::parse(r.client.Get("/admin/usage")->body);
  CHECK(usage["any_option"]["overall"] == 1.0);
  CHECK(usage["high_sessions"]["table"] == 1);

  auto assign = r.client.Post("/admin/assign", "", "application/json");
  REQUIRE(assign);
  auto c = json::parse(assign->body);
  CHECK((c["interactivity"] == "low" || c["interactivity"] == "high"));

  CHECK(r.post("/sessions", {{"preferences", {"room"}}, {"interactivity", "high"}, {"style", "table"}})->status == 400);
  CHECK(r.post("/sessions", {{"preferences", {"room", "staff", "price", "comfort", "location"}},
                             {"interactivity", "medium"}, {"style", "table"}})->status == 400);
}

}  // TEST_SUITE
