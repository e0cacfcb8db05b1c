#include "argrec/service.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

#include "argrec/error.hpp"

namespace argrec::service {

namespace {

constexpr const char* kSessionsFile = "sessions.jsonl";
constexpr const char* kEventsFile = "events.jsonl";

constexpr Condition kConditions[] = {
    {explain::Interactivity::low, explain::Style::table},
    {explain::Interactivity::low, explain::Style::bar_chart},
    {explain::Interactivity::low, explain::Style::text},
    {explain::Interactivity::high, explain::Style::table},
    {explain::Interactivity::high, explain::Style::bar_chart},
    {explain::Interactivity::high, explain::Style::text},
};

// A crash inside AppendLog::append can leave a final line without its
// newline. That request never returned, so the fragment is dropped.
void drop_torn_tail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.empty() || content.back() == '\n') return;
  auto keep = content.rfind('\n');
  keep = keep == std::string::npos ? 0 : keep + 1;
  std::error_code ec;
  std::filesystem::resize_file(path, keep, ec);
  if (ec) throw Error(ErrorCode::storage, "cannot repair " + path.string());
}

std::string session_id_for(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06zu", ordinal);
  return buf;
}

}  // namespace

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

AppendLog::AppendLog(const std::filesystem::path& path)
    : path_(path), file_(std::fopen(path.c_str(), "ab")) {
  if (!file_) throw Error(ErrorCode::storage, "cannot open " + path.string() + " for appending");
}

void AppendLog::append(const std::string& line) {
  auto* f = file_.get();
  bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() && std::fputc('\n', f) != EOF &&
            std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  if (!ok) throw Error(ErrorCode::storage, "append to " + path_.string() + " failed");
}

Condition assign_condition(std::uint64_t seed, std::size_t participant) {
  std::size_t block = participant / 6;
  std::mt19937_64 gen(seed ^ (0x9E3779B97F4A7C15ULL * (block + 1)));
  std::array<std::size_t, 6> perm;
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[gen() % (i + 1)]);
  return kConditions[perm[participant % 6]];
}

Service::Service(std::shared_ptr<const efm::Model> model,
                 std::vector<corpus::SentenceRecord> records, Config config)
    : engine_(std::move(model), std::move(records)), config_(std::move(config)) {
  if (!config_.clock) config_.clock = system_clock_ms;
  std::error_code ec;
  std::filesystem::create_directories(config_.data_dir, ec);
  if (ec) throw Error(ErrorCode::storage, "cannot create " + config_.data_dir.string());

  auto sessions_path = config_.data_dir / kSessionsFile;
  auto events_path = config_.data_dir / kEventsFile;
  std::vector<personalize::Session> stored;
  for (const auto& p : {sessions_path, events_path}) {
    if (std::filesystem::exists(p)) drop_torn_tail(p);
  }
  if (std::filesystem::exists(sessions_path)) stored = store::read_sessions(sessions_path);
  if (std::filesystem::exists(events_path)) events_ = store::read_events(events_path);

  for (auto& s : stored) {
    if (s.proxy_user_index >= engine_.model().user_count()) {
      throw Error(ErrorCode::storage, "session " + s.session_id + " has a proxy outside the model");
    }
    auto slot = std::make_unique<Slot>(std::move(s));
    order_.push_back(slot->session.session_id);
    slots_.emplace(slot->session.session_id, std::move(slot));
  }
  for (const auto& e : events_) {
    auto it = slots_.find(e.session_id);
    if (it == slots_.end()) {
      throw Error(ErrorCode::storage, "event log references unknown session " + e.session_id);
    }
    it->second->last_timestamp = std::max(it->second->last_timestamp, e.timestamp);
  }
  for (auto& [id, slot] : slots_) slot->session.dialog = store::replay_dialog(slot->session, events_);

  session_log_ = std::make_unique<AppendLog>(sessions_path);
  event_log_ = std::make_unique<AppendLog>(events_path);
}

Service::Slot& Service::slot(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = slots_.find(id);
  if (it == slots_.end()) throw Error(ErrorCode::unknown_session, "unknown session '" + id + "'");
  return *it->second;
}

personalize::Session Service::create_session(const std::vector<Feature>& ranked,
                                             explain::Interactivity interactivity,
                                             explain::Style style) {
  personalize::StatedPreferences prefs(ranked);
  auto proxy = personalize::select_proxy(engine_.model(), prefs);

  std::unique_lock lock(sessions_mutex_);
  personalize::Session s{session_id_for(order_.size() + 1), prefs, proxy, interactivity, style,
                         explain::DialogState{}, config_.clock()};
  // The initial snapshot is the base the event log is replayed onto.
  session_log_->append(store::to_json(s).dump());
  auto slot = std::make_unique<Slot>(s);
  order_.push_back(s.session_id);
  slots_.emplace(s.session_id, std::move(slot));
  return s;
}

personalize::Session Service::session(const std::string& id) const {
  auto& s = slot(id);
  std::lock_guard lock(s.mutex);
  return s.session;
}

std::vector<personalize::Session> Service::sessions() const {
  std::vector<personalize::Session> out;
  std::shared_lock lock(sessions_mutex_);
  for (const auto& id : order_) {
    const auto& s = *slots_.at(id);
    std::lock_guard slot_lock(s.mutex);
    out.push_back(s.session);
  }
  return out;
}

std::vector<personalize::Recommendation> Service::recommendations(
    const std::string& id, std::optional<std::size_t> limit) const {
  auto s = session(id);
  return personalize::recommend(engine_.model(), s.proxy_user_index,
                                limit.value_or(config_.default_limit));
}

void Service::append_event(Slot& s, store::Event e) {
  std::lock_guard lock(event_mutex_);
  event_log_->append(store::to_json(e).dump());
  s.last_timestamp = e.timestamp;
  events_.push_back(std::move(e));
}

explain::ExplanationPayload Service::handle_explanation_request(const std::string& id,
                                                                const explain::Move& move) {
  auto& s = slot(id);
  std::lock_guard lock(s.mutex);
  const auto& session = s.session;

  auto next = explain::apply_move(session.dialog, move, session.interactivity);
  if (next.item_id && !engine_.has_item(*next.item_id)) {
    throw Error(ErrorCode::unknown_item, "unknown item '" + *next.item_id + "'");
  }
  auto payload = engine_.for_state(explain::Viewer::of(session), next);

  store::Event e;
  e.session_id = id;
  e.kind = store::event_kind_for(move.kind);
  e.item_id = next.item_id ? next.item_id : session.dialog.item_id;
  e.feature = move.kind == explain::MoveKind::what_reported ? next.feature : std::nullopt;
  e.term = move.kind == explain::MoveKind::fine_grained ? next.term : std::nullopt;
  e.timestamp = std::max(config_.clock(), s.last_timestamp);
  e.origin = store::EventOrigin::server;
  append_event(s, std::move(e));

  s.session.dialog = std::move(next);
  return payload;
}

void Service::log_event(store::Event event) {
  event.validate();
  auto& s = slot(event.session_id);
  std::lock_guard lock(s.mutex);
  if (event.timestamp == 0) event.timestamp = std::max(config_.clock(), s.last_timestamp);
  if (event.timestamp < s.last_timestamp) {
    throw Error(ErrorCode::validation, "event timestamp precedes the session's last event");
  }
  event.origin = store::EventOrigin::client;
  append_event(s, std::move(event));
}

std::vector<store::Event> Service::events() const {
  std::lock_guard lock(event_mutex_);
  return events_;
}

analytics::UsageStats Service::usage() const { return analytics::usage_stats(events(), sessions()); }

Condition Service::next_condition() {
  return assign_condition(config_.assignment_seed, assigned_.fetch_add(1));
}

std::pair<int, nlohmann::json> error_response(const std::exception& e) {
  auto body = [&](const char* code) {
    return nlohmann::json{{"error", code}, {"detail", e.what()}};
  };
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return {500, body("internal_error")};
  switch (err->code()) {
    case ErrorCode::move_not_allowed: return {403, body("move_not_allowed")};
    case ErrorCode::unknown_session: return {404, body("unknown_session")};
    case ErrorCode::model_not_trained: return {503, body("model_not_trained")};
    case ErrorCode::storage:
    case ErrorCode::io: return {500, body("storage_error")};
    default: return {400, body("validation_error")};
  }
}

}  // namespace argrec::service
