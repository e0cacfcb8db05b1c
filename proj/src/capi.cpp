#include "argrec/argrec.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "argrec/analytics.hpp"
#include "argrec/aspect.hpp"
#include "argrec/error.hpp"
#include "argrec/pipeline.hpp"
#include "argrec/service.hpp"

struct argrec_classifier {
  argrec::aspect::Classifier impl;
};

struct argrec_model {
  std::shared_ptr<const argrec::efm::Model> impl;
};

struct argrec_server {
  std::unique_ptr<argrec::service::Service> service;
  std::unique_ptr<argrec::service::HttpServer> http;
};

namespace {

using argrec::ErrorCode;

thread_local std::string g_last_error;

argrec_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return ARGREC_E_IO;
    case ErrorCode::format: return ARGREC_E_FORMAT;
    case ErrorCode::validation:
    case ErrorCode::unknown_feature:
    case ErrorCode::unknown_construct:
    case ErrorCode::style_mismatch: return ARGREC_E_VALIDATION;
    case ErrorCode::dimension_mismatch: return ARGREC_E_DIMENSION;
    case ErrorCode::index_out_of_range: return ARGREC_E_INDEX;
    case ErrorCode::model_not_trained: return ARGREC_E_NOT_TRAINED;
    case ErrorCode::checkpoint_version: return ARGREC_E_CHECKPOINT_VERSION;
    case ErrorCode::unknown_session: return ARGREC_E_UNKNOWN_SESSION;
    case ErrorCode::unknown_item: return ARGREC_E_UNKNOWN_ITEM;
    case ErrorCode::move_not_allowed: return ARGREC_E_MOVE_NOT_ALLOWED;
    case ErrorCode::no_such_term: return ARGREC_E_NO_SUCH_TERM;
    case ErrorCode::empty_input: return ARGREC_E_EMPTY_INPUT;
    case ErrorCode::degenerate_input: return ARGREC_E_DEGENERATE;
    case ErrorCode::no_gold_labels: return ARGREC_E_NO_GOLD;
    case ErrorCode::storage: return ARGREC_E_STORAGE;
    case ErrorCode::bind: return ARGREC_E_BIND;
  }
  return ARGREC_E_INTERNAL;
}

template <typename F>
argrec_status guarded(F&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return ARGREC_OK;
  } catch (const argrec::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ARGREC_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ARGREC_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

argrec::efm::Hyperparams to_cpp(const argrec_hyperparams& h) {
  argrec::efm::Hyperparams out;
  out.rank = h.rank;
  out.hidden_rank = h.hidden_rank;
  out.lambda_x = h.lambda_x;
  out.lambda_y = h.lambda_y;
  out.lambda_u = h.lambda_u;
  out.lambda_h = h.lambda_h;
  out.lambda_v = h.lambda_v;
  out.learning_rate = h.learning_rate;
  out.max_epochs = h.max_epochs;
  out.seed = h.seed;
  out.tol = h.tol;
  return out;
}

}  // namespace

extern "C" {

const char* argrec_status_name(argrec_status status) {
  switch (status) {
    case ARGREC_OK: return "ok";
    case ARGREC_E_IO: return "io_error";
    case ARGREC_E_FORMAT: return "format_error";
    case ARGREC_E_VALIDATION: return "validation_error";
    case ARGREC_E_DIMENSION: return "dimension_mismatch";
    case ARGREC_E_INDEX: return "index_out_of_range";
    case ARGREC_E_NOT_TRAINED: return "model_not_trained";
    case ARGREC_E_CHECKPOINT_VERSION: return "checkpoint_version";
    case ARGREC_E_UNKNOWN_SESSION: return "unknown_session";
    case ARGREC_E_UNKNOWN_ITEM: return "unknown_item";
    case ARGREC_E_MOVE_NOT_ALLOWED: return "move_not_allowed";
    case ARGREC_E_NO_SUCH_TERM: return "no_such_term";
    case ARGREC_E_EMPTY_INPUT: return "empty_input";
    case ARGREC_E_DEGENERATE: return "degenerate_input";
    case ARGREC_E_NO_GOLD: return "no_gold_labels";
    case ARGREC_E_STORAGE: return "storage_error";
    case ARGREC_E_BIND: return "bind_error";
    case ARGREC_E_INVALID_ARGUMENT: return "invalid_argument";
    case ARGREC_E_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* argrec_last_error(void) { return g_last_error.c_str(); }

void argrec_string_free(char* s) { std::free(s); }

argrec_status argrec_classifier_create(const char* lexicon_path, const char* sentiment_path,
                                       int gold_passthrough, argrec_classifier** out) {
  if (out == nullptr || lexicon_path == nullptr || sentiment_path == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto mode = gold_passthrough != 0 ? argrec::aspect::Mode::gold_passthrough
                                      : argrec::aspect::Mode::lexicon_rule;
    *out = new argrec_classifier{argrec::aspect::Classifier(
        mode, argrec::corpus::FineGrainedLexicon::load(lexicon_path),
        argrec::aspect::SentimentLexicon::load(sentiment_path))};
  });
}

void argrec_classifier_destroy(argrec_classifier* c) { delete c; }

argrec_status argrec_classify(const argrec_classifier* c, const char* text, char** out_json) {
  if (c == nullptr || text == nullptr || out_json == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto r = c->impl.classify(argrec::corpus::RawSentence{text, std::nullopt, std::nullopt});
    nlohmann::json j;
    j["feature"] = r.feature ? nlohmann::json(std::string(argrec::feature_name(*r.feature)))
                             : nlohmann::json(nullptr);
    j["term"] = r.term ? nlohmann::json(*r.term) : nlohmann::json(nullptr);
    j["polarity"] = std::string(argrec::polarity_name(r.polarity));
    *out_json = dup_string(j.dump());
  });
}

argrec_status argrec_ingest(const argrec_classifier* c, const char* corpus_path,
                            const char* records_out, size_t* out_records,
                            char** out_summary_json) {
  if (c == nullptr || corpus_path == nullptr || records_out == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto summary = argrec::pipeline::ingest(corpus_path, c->impl, records_out);
    if (out_records != nullptr) *out_records = summary.records;
    if (out_summary_json != nullptr) *out_summary_json = dup_string(to_json(summary).dump());
  });
}

argrec_status argrec_classifier_report(const argrec_classifier* c, const char* corpus_path,
                                       char** out_json) {
  if (c == nullptr || corpus_path == nullptr || out_json == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto report = argrec::analytics::classifier_report(argrec::corpus::parse_corpus(corpus_path), c->impl);
    nlohmann::json j;
    j["aspect"] = report.aspect ? to_json(*report.aspect) : nlohmann::json(nullptr);
    j["polarity"] = report.polarity ? to_json(*report.polarity) : nlohmann::json(nullptr);
    *out_json = dup_string(j.dump());
  });
}

void argrec_hyperparams_default(argrec_hyperparams* h) {
  if (h == nullptr) return;
  argrec::efm::Hyperparams d;
  *h = argrec_hyperparams{d.rank,     d.hidden_rank, d.lambda_x,      d.lambda_y,
                          d.lambda_u, d.lambda_h,    d.lambda_v,      d.learning_rate,
                          d.max_epochs, d.seed,      d.tol};
}

argrec_status argrec_train(const char* corpus_path, const char* records_path,
                           const argrec_hyperparams* h, argrec_model** out,
                           char** out_report_json) {
  if (corpus_path == nullptr || records_path == nullptr || h == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto reviews = argrec::corpus::parse_corpus(corpus_path);
    auto records = argrec::corpus::read_records(records_path);
    auto report = argrec::pipeline::train(reviews, records, to_cpp(*h));
    if (out_report_json != nullptr) *out_report_json = dup_string(to_json(report).dump());
    *out = new argrec_model{std::make_shared<const argrec::efm::Model>(std::move(report.model))};
  });
}

argrec_status argrec_model_save(const argrec_model* m, const char* path) {
  if (m == nullptr || path == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] { argrec::efm::save_checkpoint(std::filesystem::path(path), *m->impl); });
}

argrec_status argrec_model_load(const char* path, argrec_model** out) {
  if (path == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new argrec_model{std::make_shared<const argrec::efm::Model>(
        argrec::efm::load_checkpoint(std::filesystem::path(path)))};
  });
}

void argrec_model_destroy(argrec_model* m) { delete m; }

size_t argrec_model_user_count(const argrec_model* m) { return m ? m->impl->user_count() : 0; }

size_t argrec_model_item_count(const argrec_model* m) { return m ? m->impl->item_count() : 0; }

argrec_status argrec_model_predict(const argrec_model* m, size_t user, size_t item, double* out) {
  if (m == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = m->impl->predict_rating(user, item); });
}

argrec_status argrec_model_recommend(const argrec_model* m, const char* const* preferences,
                                     size_t n_preferences, size_t limit, char** out_json) {
  if (m == nullptr || out_json == nullptr || (preferences == nullptr && n_preferences > 0)) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<argrec::Feature> ranked;
    for (size_t i = 0; i < n_preferences; ++i) {
      auto f = argrec::parse_feature(preferences[i] ? preferences[i] : "");
      if (!f) {
        throw argrec::Error(ErrorCode::validation,
                            std::string("unknown feature '") + (preferences[i] ? preferences[i] : "") + "'");
      }
      ranked.push_back(*f);
    }
    argrec::personalize::StatedPreferences prefs(ranked);
    auto proxy = argrec::personalize::select_proxy(*m->impl, prefs);
    nlohmann::json items = nlohmann::json::array();
    for (const auto& r : argrec::personalize::recommend(*m->impl, proxy, limit)) {
      items.push_back({{"item_id", r.item_id}, {"predicted_rating", r.predicted_rating},
                       {"circles", r.circles}});
    }
    nlohmann::json j = {{"proxy_user_id", m->impl->users().id(proxy)}, {"items", std::move(items)}};
    *out_json = dup_string(j.dump());
  });
}

argrec_status argrec_server_create(const argrec_model* m, const char* records_path,
                                   const char* data_dir, size_t default_limit,
                                   uint64_t assignment_seed, argrec_server** out) {
  if (m == nullptr || records_path == nullptr || data_dir == nullptr || out == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    argrec::service::Config config;
    config.data_dir = data_dir;
    config.default_limit = default_limit == 0 ? argrec::personalize::kDefaultRecommendationLimit
                                              : default_limit;
    config.assignment_seed = assignment_seed;
    auto server = std::make_unique<argrec_server>();
    server->service = std::make_unique<argrec::service::Service>(
        m->impl, argrec::corpus::read_records(records_path), std::move(config));
    server->http = std::make_unique<argrec::service::HttpServer>(*server->service);
    *out = server.release();
  });
}

argrec_status argrec_server_bind(argrec_server* s, const char* host, int port, int* out_port) {
  if (s == nullptr || host == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  if (port < 0 || port > 65535) {
    g_last_error = "port outside 0..65535";
    return ARGREC_E_VALIDATION;
  }
  return guarded([&] {
    int bound = s->http->bind(host, port);
    if (out_port != nullptr) *out_port = bound;
  });
}

argrec_status argrec_server_run(argrec_server* s) {
  if (s == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] { s->http->serve(); });
}

void argrec_server_stop(argrec_server* s) {
  if (s != nullptr) s->http->stop();
}

void argrec_server_destroy(argrec_server* s) { delete s; }

argrec_status argrec_stats(const char* events_path, const char* sessions_path,
                           const char* questionnaire_path, char** out_json) {
  if (events_path == nullptr || sessions_path == nullptr || out_json == nullptr) {
    g_last_error = "null argument";
    return ARGREC_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto events = argrec::store::read_events(std::filesystem::path(events_path));
    auto sessions = argrec::store::read_sessions(std::filesystem::path(sessions_path));
    std::vector<argrec::analytics::QuestionnaireResponse> questionnaires;
    if (questionnaire_path != nullptr) {
      questionnaires = argrec::analytics::read_questionnaires(questionnaire_path);
    }
    *out_json = dup_string(argrec::analytics::stats_report(events, sessions, questionnaires).dump());
  });
}

}  // extern "C"
