#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "argrec/analytics.hpp"
#include "argrec/explain.hpp"
#include "argrec/personalize.hpp"
#include "argrec/store.hpp"

namespace argrec::service {

using Clock = std::function<std::int64_t()>;

/// Wall clock in milliseconds since epoch.
std::int64_t system_clock_ms();

/// Line-oriented append-only file; every append is flushed and synced before
/// returning.
class AppendLog {
 public:
  explicit AppendLog(const std::filesystem::path& path);
  void append(const std::string& line);

 private:
  struct Closer {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
  };
  std::filesystem::path path_;
  std::unique_ptr<std::FILE, Closer> file_;
};

struct Config {
  std::filesystem::path data_dir;  // holds sessions.jsonl and events.jsonl
  std::size_t default_limit = personalize::kDefaultRecommendationLimit;
  std::uint64_t assignment_seed = 0;
  Clock clock = system_clock_ms;
};

struct Condition {
  explain::Interactivity interactivity;
  explain::Style style;
};

/// Seeded round-robin over the six interactivity x style conditions: each
/// block of six consecutive participants receives every condition once.
Condition assign_condition(std::uint64_t seed, std::size_t participant);

/// Sessions, recommendations, explanation dialog and event logging over a
/// read-only model. Requests on one session are serialized; the event log
/// has a single total order.
class Service {
 public:
  /// Loads any existing session store and event log from `config.data_dir`
  /// and replays the logged moves to restore dialog states.
  Service(std::shared_ptr<const efm::Model> model, std::vector<corpus::SentenceRecord> records,
          Config config);

  personalize::Session create_session(const std::vector<Feature>& ranked,
                                      explain::Interactivity interactivity, explain::Style style);
  personalize::Session session(const std::string& id) const;
  std::vector<personalize::Session> sessions() const;

  std::vector<personalize::Recommendation> recommendations(const std::string& id,
                                                           std::optional<std::size_t> limit) const;

  /// Applies the move, appends the matching server event, then commits the
  /// new dialog state. Nothing changes when any step throws.
  explain::ExplanationPayload handle_explanation_request(const std::string& id,
                                                         const explain::Move& move);

  /// Appends a client event after validation. Missing timestamps are stamped
  /// with the service clock.
  void log_event(store::Event event);

  std::vector<store::Event> events() const;
  analytics::UsageStats usage() const;
  Condition next_condition();

  const explain::Engine& engine() const noexcept { return engine_; }
  const efm::Model& model() const noexcept { return engine_.model(); }

 private:
  struct Slot {
    explicit Slot(personalize::Session s) : session(std::move(s)) {}
    mutable std::mutex mutex;
    personalize::Session session;
    std::int64_t last_timestamp = 0;
  };

  Slot& slot(const std::string& id) const;
  void append_event(Slot& s, store::Event e);

  explain::Engine engine_;
  Config config_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
  std::vector<std::string> order_;
  std::unique_ptr<AppendLog> session_log_;
  mutable std::mutex event_mutex_;
  std::vector<store::Event> events_;
  std::unique_ptr<AppendLog> event_log_;
  std::atomic<std::size_t> assigned_{0};
};

/// HTTP status and body for an error, e.g. 403 {"error":"move_not_allowed"}.
std::pair<int, nlohmann::json> error_response(const std::exception& e);

/// JSON facade over a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Throws bind Error.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace argrec::service
