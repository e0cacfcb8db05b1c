#include "argrec/store.hpp"

#include <fstream>
#include <map>

#include "argrec/error.hpp"

namespace argrec::store {

using nlohmann::json;

namespace {

std::optional<std::string> opt_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::validation, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::string req_string(const json& j, const char* key) {
  auto v = opt_string(j, key);
  if (!v || v->empty()) throw Error(ErrorCode::validation, std::string("missing '") + key + "'");
  return *v;
}

Feature req_feature(const std::string& name) {
  auto f = parse_feature(name);
  if (!f) throw Error(ErrorCode::validation, "unknown feature '" + name + "'");
  return *f;
}

template <typename T, typename F>
std::vector<T> read_jsonl(std::istream& in, F&& decode) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError(line_no, e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::format) throw;
      throw FormatError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace

void Event::validate() const {
  if (session_id.empty()) throw Error(ErrorCode::validation, "event without session_id");
  auto need = [&](bool present, const char* field) {
    if (!present) {
      throw Error(ErrorCode::validation, std::string(event_kind_name(kind)) + " event requires '" +
                                             field + "'");
    }
  };
  switch (kind) {
    case EventKind::more_why:
    case EventKind::choose_hotel:
      need(item_id && !item_id->empty(), "item_id");
      break;
    case EventKind::what_reported:
      need(feature.has_value(), "feature");
      break;
    case EventKind::fine_grained:
      need(term && !term->empty(), "term");
      break;
    default:
      break;
  }
  if (timestamp < 0) throw Error(ErrorCode::validation, "negative timestamp");
}

std::string_view event_kind_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::view_list: return "view_list";
    case EventKind::more_why: return "more_why";
    case EventKind::more_features: return "more_features";
    case EventKind::what_reported: return "what_reported";
    case EventKind::fine_grained: return "fine_grained";
    case EventKind::choose_hotel: return "choose_hotel";
    case EventKind::back: return "back";
  }
  return "view_list";
}

std::optional<EventKind> parse_event_kind(std::string_view s) noexcept {
  for (auto k : {EventKind::view_list, EventKind::more_why, EventKind::more_features,
                 EventKind::what_reported, EventKind::fine_grained, EventKind::choose_hotel,
                 EventKind::back}) {
    if (event_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

EventKind event_kind_for(explain::MoveKind k) noexcept {
  switch (k) {
    case explain::MoveKind::more_why: return EventKind::more_why;
    case explain::MoveKind::more_features: return EventKind::more_features;
    case explain::MoveKind::what_reported: return EventKind::what_reported;
    case explain::MoveKind::fine_grained: return EventKind::fine_grained;
    case explain::MoveKind::back: return EventKind::back;
  }
  return EventKind::back;
}

std::optional<explain::MoveKind> move_kind_for(EventKind k) noexcept {
  switch (k) {
    case EventKind::more_why: return explain::MoveKind::more_why;
    case EventKind::more_features: return explain::MoveKind::more_features;
    case EventKind::what_reported: return explain::MoveKind::what_reported;
    case EventKind::fine_grained: return explain::MoveKind::fine_grained;
    case EventKind::back: return explain::MoveKind::back;
    default: return std::nullopt;
  }
}

json to_json(const Event& e) {
  json j = {{"session_id", e.session_id}, {"kind", std::string(event_kind_name(e.kind))}};
  if (e.item_id) j["item_id"] = *e.item_id;
  if (e.feature) j["feature"] = std::string(feature_name(*e.feature));
  if (e.term) j["term"] = *e.term;
  j["timestamp"] = e.timestamp;
  j["origin"] = e.origin == EventOrigin::server ? "server" : "client";
  return j;
}

Event event_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "event must be a JSON object");
  Event e;
  e.session_id = req_string(j, "session_id");
  auto kind = req_string(j, "kind");
  auto parsed = parse_event_kind(kind);
  if (!parsed) throw Error(ErrorCode::validation, "unknown event kind '" + kind + "'");
  e.kind = *parsed;
  e.item_id = opt_string(j, "item_id");
  if (auto f = opt_string(j, "feature")) e.feature = req_feature(*f);
  e.term = opt_string(j, "term");
  if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw Error(ErrorCode::validation, "timestamp must be an integer");
    e.timestamp = it->get<std::int64_t>();
  }
  if (auto origin = opt_string(j, "origin")) {
    if (*origin == "server") {
      e.origin = EventOrigin::server;
    } else if (*origin != "client") {
      throw Error(ErrorCode::validation, "unknown origin '" + *origin + "'");
    }
  }
  e.validate();
  return e;
}

json to_json(const explain::DialogState& s) {
  json j = {{"level", std::string(explain::level_name(s.level))}, {"expanded", s.expanded}};
  j["item_id"] = s.item_id ? json(*s.item_id) : json(nullptr);
  j["feature"] = s.feature ? json(std::string(feature_name(*s.feature))) : json(nullptr);
  j["term"] = s.term ? json(*s.term) : json(nullptr);
  return j;
}

explain::DialogState dialog_from_json(const json& j) {
  explain::DialogState s;
  auto level = req_string(j, "level");
  auto parsed = explain::parse_level(level);
  if (!parsed) throw Error(ErrorCode::validation, "unknown level '" + level + "'");
  s.level = *parsed;
  s.item_id = opt_string(j, "item_id");
  s.expanded = j.value("expanded", false);
  if (auto f = opt_string(j, "feature")) s.feature = req_feature(*f);
  s.term = opt_string(j, "term");
  if (!s.valid()) throw Error(ErrorCode::validation, "inconsistent dialog state");
  return s;
}

json to_json(const personalize::Session& s) {
  json prefs = json::array();
  for (auto f : s.prefs.ranked()) prefs.push_back(std::string(feature_name(f)));
  return json{{"session_id", s.session_id},
              {"preferences", std::move(prefs)},
              {"proxy_user_index", s.proxy_user_index},
              {"interactivity", std::string(explain::interactivity_name(s.interactivity))},
              {"style", std::string(explain::style_name(s.style))},
              {"dialog", to_json(s.dialog)},
              {"created_at", s.created_at}};
}

personalize::Session session_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "session must be a JSON object");
  std::vector<Feature> ranked;
  for (const auto& f : j.at("preferences")) ranked.push_back(req_feature(f.get<std::string>()));
  auto inter = explain::parse_interactivity(req_string(j, "interactivity"));
  auto style = explain::parse_style(req_string(j, "style"));
  if (!inter || !style) throw Error(ErrorCode::validation, "bad interactivity or style");
  personalize::Session s{req_string(j, "session_id"),
                         personalize::StatedPreferences(ranked),
                         j.at("proxy_user_index").get<std::size_t>(),
                         *inter,
                         *style,
                         j.contains("dialog") ? dialog_from_json(j.at("dialog"))
                                              : explain::DialogState{},
                         j.value("created_at", std::int64_t{0})};
  return s;
}

std::vector<Event> read_events(std::istream& in) {
  return read_jsonl<Event>(in, [](const json& j) { return event_from_json(j); });
}

std::vector<Event> read_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_events(in);
}

std::vector<personalize::Session> read_sessions(std::istream& in) {
  auto snapshots =
      read_jsonl<personalize::Session>(in, [](const json& j) { return session_from_json(j); });
  // Later snapshots of the same session replace earlier ones in place.
  std::vector<personalize::Session> out;
  std::map<std::string, std::size_t> position;
  for (auto& s : snapshots) {
    auto [it, inserted] = position.emplace(s.session_id, out.size());
    if (inserted) {
      out.push_back(std::move(s));
    } else {
      out[it->second] = std::move(s);
    }
  }
  return out;
}

std::vector<personalize::Session> read_sessions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_sessions(in);
}

explain::DialogState replay_dialog(const personalize::Session& initial,
                                   const std::vector<Event>& events) {
  auto state = initial.dialog;
  for (const auto& e : events) {
    if (e.session_id != initial.session_id || e.origin != EventOrigin::server) continue;
    auto kind = move_kind_for(e.kind);
    if (!kind) continue;
    explain::Move m{*kind, e.item_id, e.feature, e.term};
    state = explain::apply_move(state, m, initial.interactivity);
  }
  return state;
}

}  // namespace argrec::store
