// argrec command line: ingest, train, serve, stats, recommend, evaluate.
// Talks to the library exclusively through the C interface.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "argrec/argrec.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeError = 3 };

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

int exit_code_for(argrec_status s) {
  switch (s) {
    case ARGREC_OK:
      return kOk;
    case ARGREC_E_IO:
    case ARGREC_E_FORMAT:
    case ARGREC_E_VALIDATION:
    case ARGREC_E_DIMENSION:
    case ARGREC_E_CHECKPOINT_VERSION:
    case ARGREC_E_UNKNOWN_ITEM:
    case ARGREC_E_NO_GOLD:
    case ARGREC_E_EMPTY_INPUT:
    case ARGREC_E_NOT_TRAINED:
      return kDataError;
    default:
      return kRuntimeError;
  }
}

int fail(argrec_status s) {
  std::cerr << "error: " << argrec_status_name(s) << ": " << argrec_last_error() << "\n";
  return exit_code_for(s);
}

struct StringDeleter {
  void operator()(char* s) const noexcept { argrec_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ClassifierDeleter {
  void operator()(argrec_classifier* c) const noexcept { argrec_classifier_destroy(c); }
};
struct ModelDeleter {
  void operator()(argrec_model* m) const noexcept { argrec_model_destroy(m); }
};
struct ServerDeleter {
  void operator()(argrec_server* s) const noexcept { argrec_server_destroy(s); }
};

void print_json(const char* raw) { std::cout << nlohmann::json::parse(raw).dump(2) << std::endl; }

struct Options {
  std::string corpus;
  std::string lexicon = "data/lexicon/features.tsv";
  std::string sentiment_lexicon = "data/lexicon/sentiment.tsv";
  std::string records;
  std::string checkpoint;
  std::string mode = "gold";
  std::string addr = "127.0.0.1:8080";
  std::string data_dir = "argrec-data";
  std::string events;
  std::string sessions;
  std::string questionnaire;
  std::vector<std::string> prefs;
  std::size_t limit = 30;
  argrec_hyperparams hyper{};
};

int make_classifier(const Options& o, std::unique_ptr<argrec_classifier, ClassifierDeleter>& out) {
  argrec_classifier* raw = nullptr;
  auto s = argrec_classifier_create(o.lexicon.c_str(), o.sentiment_lexicon.c_str(),
                                    o.mode == "gold" ? 1 : 0, &raw);
  if (s != ARGREC_OK) return fail(s);
  out.reset(raw);
  return kOk;
}

int cmd_ingest(const Options& o) {
  std::unique_ptr<argrec_classifier, ClassifierDeleter> classifier;
  if (int rc = make_classifier(o, classifier)) return rc;
  std::size_t count = 0;
  char* summary = nullptr;
  auto s = argrec_ingest(classifier.get(), o.corpus.c_str(), o.records.c_str(), &count, &summary);
  if (s != ARGREC_OK) return fail(s);
  OwnedString owned(summary);
  print_json(summary);
  std::cerr << count << " records written to " << o.records << "\n";
  return kOk;
}

int cmd_evaluate(const Options& o) {
  std::unique_ptr<argrec_classifier, ClassifierDeleter> classifier;
  if (int rc = make_classifier(o, classifier)) return rc;
  char* report = nullptr;
  auto s = argrec_classifier_report(classifier.get(), o.corpus.c_str(), &report);
  if (s != ARGREC_OK) return fail(s);
  OwnedString owned(report);
  print_json(report);
  return kOk;
}

int cmd_train(const Options& o) {
  argrec_model* raw = nullptr;
  char* report = nullptr;
  auto s = argrec_train(o.corpus.c_str(), o.records.c_str(), &o.hyper, &raw, &report);
  if (s != ARGREC_OK) return fail(s);
  std::unique_ptr<argrec_model, ModelDeleter> model(raw);
  OwnedString owned(report);
  s = argrec_model_save(model.get(), o.checkpoint.c_str());
  if (s != ARGREC_OK) return fail(s);
  print_json(report);
  return kOk;
}

int cmd_recommend(const Options& o) {
  argrec_model* raw = nullptr;
  auto s = argrec_model_load(o.checkpoint.c_str(), &raw);
  if (s != ARGREC_OK) return fail(s);
  std::unique_ptr<argrec_model, ModelDeleter> model(raw);
  std::vector<const char*> prefs;
  for (const auto& p : o.prefs) prefs.push_back(p.c_str());
  char* out = nullptr;
  s = argrec_model_recommend(model.get(), prefs.data(), prefs.size(), o.limit, &out);
  if (s != ARGREC_OK) return fail(s);
  OwnedString owned(out);
  print_json(out);
  return kOk;
}

int cmd_serve(const Options& o) {
  auto colon = o.addr.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --addr must be host:port\n";
    return kUsage;
  }
  std::string host = o.addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(o.addr.substr(colon + 1));
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) {
    std::cerr << "error: port must be within 0..65535\n";
    return kUsage;
  }

  argrec_model* raw_model = nullptr;
  auto s = argrec_model_load(o.checkpoint.c_str(), &raw_model);
  if (s != ARGREC_OK) return fail(s);
  std::unique_ptr<argrec_model, ModelDeleter> model(raw_model);

  argrec_server* raw_server = nullptr;
  s = argrec_server_create(model.get(), o.records.c_str(), o.data_dir.c_str(), o.limit,
                           o.hyper.seed, &raw_server);
  if (s != ARGREC_OK) return fail(s);
  std::unique_ptr<argrec_server, ServerDeleter> server(raw_server);

  int bound = 0;
  s = argrec_server_bind(server.get(), host.c_str(), port, &bound);
  if (s != ARGREC_OK) return fail(s);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done.load()) {
      if (g_stop.load()) {
        argrec_server_stop(server.get());
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });

  std::cout << "listening on " << host << ":" << bound << std::endl;
  s = argrec_server_run(server.get());
  done.store(true);
  watcher.join();
  if (s != ARGREC_OK) return fail(s);
  std::cout << "shut down" << std::endl;
  return kOk;
}

int cmd_stats(const Options& o) {
  char* out = nullptr;
  auto s = argrec_stats(o.events.c_str(), o.sessions.c_str(),
                        o.questionnaire.empty() ? nullptr : o.questionnaire.c_str(), &out);
  if (s != ARGREC_OK) return fail(s);
  OwnedString owned(out);
  print_json(out);
  return kOk;
}

void add_classifier_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lexicon", o.lexicon, "Fine-grained term -> feature TSV")->capture_default_str();
  cmd->add_option("--sentiment-lexicon", o.sentiment_lexicon, "Sentiment/negation TSV")
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "gold: use gold annotations when present; rules: lexicon only")
      ->check(CLI::IsMember({"gold", "rules"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  argrec_hyperparams_default(&o.hyper);

  CLI::App app{"Explainable review-based hotel recommender"};
  app.set_config("--config", "", "TOML/INI file with flag values; flags on the command line win");
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Classify corpus sentences into SentenceRecord JSONL");
  ingest->add_option("--corpus", o.corpus, "Review corpus JSONL")->required();
  ingest->add_option("--records", o.records, "Output records JSONL")->required();
  add_classifier_flags(ingest, o);

  auto* evaluate = app.add_subcommand("evaluate", "Score the classifier on gold-annotated sentences");
  evaluate->add_option("--corpus", o.corpus, "Review corpus JSONL")->required();
  add_classifier_flags(evaluate, o);

  auto* train = app.add_subcommand("train", "Fit the factor model and write a checkpoint");
  train->add_option("--corpus", o.corpus, "Review corpus JSONL (ratings)")->required();
  train->add_option("--records", o.records, "SentenceRecord JSONL")->required();
  train->add_option("--checkpoint", o.checkpoint, "Output checkpoint")->required();
  train->add_option("--seed", o.hyper.seed, "Seed for init and holdout split")->capture_default_str();
  train->add_option("--epochs", o.hyper.max_epochs, "Maximum epochs")->capture_default_str();
  train->add_option("--rank", o.hyper.rank, "Explicit factor rank")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--hidden-rank", o.hyper.hidden_rank, "Hidden factor rank")->capture_default_str();
  train->add_option("--lr", o.hyper.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--lambda-x", o.hyper.lambda_x)->capture_default_str();
  train->add_option("--lambda-y", o.hyper.lambda_y)->capture_default_str();
  train->add_option("--lambda-u", o.hyper.lambda_u)->capture_default_str();
  train->add_option("--lambda-h", o.hyper.lambda_h)->capture_default_str();
  train->add_option("--lambda-v", o.hyper.lambda_v)->capture_default_str();
  train->add_option("--tol", o.hyper.tol, "Relative objective change to stop at")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  serve->add_option("--records", o.records, "SentenceRecord JSONL")->required();
  serve->add_option("--addr", o.addr, "host:port (port 0 picks a free port)")->capture_default_str();
  serve->add_option("--data-dir", o.data_dir, "Session store and event log directory")->capture_default_str();
  serve->add_option("--limit", o.limit, "Default recommendation list length")->capture_default_str();
  serve->add_option("--seed", o.hyper.seed, "Condition-assignment seed")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Usage and questionnaire statistics");
  stats->add_option("--events", o.events, "Event log JSONL")->required();
  stats->add_option("--sessions", o.sessions, "Session store JSONL")->required();
  stats->add_option("--questionnaire", o.questionnaire, "Questionnaire responses JSONL");

  auto* recommend = app.add_subcommand("recommend", "Recommend for a stated top-5 feature ranking");
  recommend->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  recommend->add_option("--prefs", o.prefs, "Five feature names, most important first")
      ->required()
      ->delimiter(',');
  recommend->add_option("--limit", o.limit, "List length")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (ingest->parsed()) return cmd_ingest(o);
  if (evaluate->parsed()) return cmd_evaluate(o);
  if (train->parsed()) return cmd_train(o);
  if (serve->parsed()) return cmd_serve(o);
  if (stats->parsed()) return cmd_stats(o);
  if (recommend->parsed()) return cmd_recommend(o);
  return kUsage;
}
