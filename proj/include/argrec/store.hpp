#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "argrec/dialog.hpp"
#include "argrec/personalize.hpp"
#include "argrec/types.hpp"

// Usage events and session snapshots, plus their JSONL encoding.
namespace argrec::store {

enum class EventKind {
  view_list,
  more_why,
  more_features,
  what_reported,
  fine_grained,
  choose_hotel,
  back,
};

/// server: recorded by the service alongside an explanation move;
/// client: posted by the UI. Only server events drive dialog replay.
enum class EventOrigin { server, client };

struct Event {
  std::string session_id;
  EventKind kind = EventKind::view_list;
  std::optional<std::string> item_id;
  std::optional<Feature> feature;
  std::optional<std::string> term;
  std::int64_t timestamp = 0;  // ms since epoch
  EventOrigin origin = EventOrigin::client;

  /// Throws validation Error when a field required by `kind` is missing:
  /// more_why and choose_hotel need item_id, what_reported needs feature,
  /// fine_grained needs term.
  void validate() const;
  bool operator==(const Event&) const = default;
};

std::string_view event_kind_name(EventKind k) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view s) noexcept;

/// Event kind recorded for an explanation move.
EventKind event_kind_for(explain::MoveKind k) noexcept;
/// Inverse of event_kind_for; empty for kinds that are not moves.
std::optional<explain::MoveKind> move_kind_for(EventKind k) noexcept;

nlohmann::json to_json(const Event& e);
/// Throws validation Error on schema violations.
Event event_from_json(const nlohmann::json& j);

nlohmann::json to_json(const explain::DialogState& s);
explain::DialogState dialog_from_json(const nlohmann::json& j);

nlohmann::json to_json(const personalize::Session& s);
personalize::Session session_from_json(const nlohmann::json& j);

std::vector<Event> read_events(std::istream& in);
std::vector<Event> read_events(const std::filesystem::path& path);
std::vector<personalize::Session> read_sessions(std::istream& in);
std::vector<personalize::Session> read_sessions(const std::filesystem::path& path);

/// Folds the server-origin events of one session over its initial dialog
/// state.
explain::DialogState replay_dialog(const personalize::Session& initial,
                                   const std::vector<Event>& events);

}  // namespace argrec::store
