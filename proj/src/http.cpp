// Eigen (via service.hpp) must precede httplib: <resolv.h> defines _res.
#include "argrec/error.hpp"
#include "argrec/service.hpp"

#include <httplib.h>

namespace argrec::service {

using nlohmann::json;

namespace {

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::validation, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::validation, std::string("invalid JSON body: ") + e.what());
  }
}

std::optional<std::string> opt_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::validation, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

Feature feature_arg(const std::string& name) {
  auto f = parse_feature(name);
  if (!f) throw Error(ErrorCode::validation, "unknown feature '" + name + "'");
  return *f;
}

explain::Move move_from_json(const json& j) {
  auto kind_name = opt_string(j, "move");
  if (!kind_name) throw Error(ErrorCode::validation, "missing 'move'");
  auto kind = explain::parse_move_kind(*kind_name);
  if (!kind) throw Error(ErrorCode::validation, "unknown move '" + *kind_name + "'");
  explain::Move m{*kind, opt_string(j, "item_id"), std::nullopt, opt_string(j, "term")};
  if (auto f = opt_string(j, "feature")) m.feature = feature_arg(*f);
  return m;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F&& fn) {
  return [fn = std::forward<F>(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const std::exception& e) {
      auto [status, body] = error_response(e);
      send_json(res, status, body);
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  bool bound = false;

  explicit Impl(Service& s) : service(s) { routes(); }

  void routes() {
    server.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200,
                {{"status", "ok"},
                 {"users", service.model().user_count()},
                 {"items", service.model().item_count()}});
    }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req);
      auto prefs = body.find("preferences");
      if (prefs == body.end() || !prefs->is_array()) {
        throw Error(ErrorCode::validation, "'preferences' must be an array");
      }
      std::vector<Feature> ranked;
      for (const auto& p : *prefs) {
        if (!p.is_string()) throw Error(ErrorCode::validation, "preferences must be strings");
        ranked.push_back(feature_arg(p.get<std::string>()));
      }
      auto inter = explain::parse_interactivity(opt_string(body, "interactivity").value_or(""));
      auto style = explain::parse_style(opt_string(body, "style").value_or(""));
      if (!inter) throw Error(ErrorCode::validation, "'interactivity' must be low or high");
      if (!style) throw Error(ErrorCode::validation, "'style' must be text, table or bar_chart");
      auto s = service.create_session(ranked, *inter, *style);
      send_json(res, 201,
                {{"session_id", s.session_id},
                 {"proxy_user_id", service.model().users().id(s.proxy_user_index)}});
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = service.session(req.matches[1]);
      auto j = store::to_json(s);
      j["proxy_user_id"] = service.model().users().id(s.proxy_user_index);
      send_json(res, 200, j);
    }));

    server.Get(R"(/sessions/([^/]+)/recommendations)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::optional<std::size_t> limit;
                 if (req.has_param("limit")) {
                   try {
                     auto v = std::stoll(req.get_param_value("limit"));
                     if (v < 1) throw std::invalid_argument("limit");
                     limit = static_cast<std::size_t>(v);
                   } catch (const std::exception&) {
                     throw Error(ErrorCode::validation, "limit must be a positive integer");
                   }
                 }
                 json items = json::array();
                 for (const auto& r : service.recommendations(req.matches[1], limit)) {
                   items.push_back({{"item_id", r.item_id},
                                    {"predicted_rating", r.predicted_rating},
                                    {"circles", r.circles}});
                 }
                 send_json(res, 200, {{"items", std::move(items)}});
               }));

    server.Post(R"(/sessions/([^/]+)/explanation)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  std::string id = req.matches[1];
                  service.session(id);  // unknown session wins over body errors
                  auto payload = service.handle_explanation_request(id, move_from_json(parse_body(req)));
                  send_json(res, 200, explain::to_json(payload));
                }));

    server.Post(R"(/sessions/([^/]+)/events)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  std::string id = req.matches[1];
                  service.session(id);
                  auto body = parse_body(req);
                  body["session_id"] = id;
                  service.log_event(store::event_from_json(body));
                  res.status = 204;
                }));

    server.Get("/admin/usage", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, analytics::to_json(service.usage()));
    }));

    server.Post("/admin/assign", guarded([this](const httplib::Request&, httplib::Response& res) {
      auto c = service.next_condition();
      send_json(res, 200,
                {{"interactivity", std::string(explain::interactivity_name(c.interactivity))},
                 {"style", std::string(explain::style_name(c.style))}});
    }));
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound_port = -1;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound_port = port;
  }
  if (bound_port < 0) {
    throw Error(ErrorCode::bind, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound_port;
}

void HttpServer::serve() {
  if (!impl_->bound) throw Error(ErrorCode::bind, "serve() before bind()");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace argrec::service
