/*
 * argrec: explainable review-based hotel recommender, C interface.
 *
 * Objects are opaque handles created by *_create/*_load/argrec_train and
 * released by the matching *_destroy. Every fallible call returns an
 * argrec_status; on failure argrec_last_error() describes the problem for
 * the calling thread. Strings returned through char** are heap-allocated
 * and must be released with argrec_string_free().
 */
#ifndef ARGREC_ARGREC_H
#define ARGREC_ARGREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ARGREC_API __declspec(dllexport)
#else
#define ARGREC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum argrec_status {
  ARGREC_OK = 0,
  ARGREC_E_IO = 1,
  ARGREC_E_FORMAT = 2,
  ARGREC_E_VALIDATION = 3,
  ARGREC_E_DIMENSION = 4,
  ARGREC_E_INDEX = 5,
  ARGREC_E_NOT_TRAINED = 6,
  ARGREC_E_CHECKPOINT_VERSION = 7,
  ARGREC_E_UNKNOWN_SESSION = 8,
  ARGREC_E_UNKNOWN_ITEM = 9,
  ARGREC_E_MOVE_NOT_ALLOWED = 10,
  ARGREC_E_NO_SUCH_TERM = 11,
  ARGREC_E_EMPTY_INPUT = 12,
  ARGREC_E_DEGENERATE = 13,
  ARGREC_E_NO_GOLD = 14,
  ARGREC_E_STORAGE = 15,
  ARGREC_E_BIND = 16,
  ARGREC_E_INVALID_ARGUMENT = 17, /* null handle or pointer */
  ARGREC_E_INTERNAL = 99
} argrec_status;

typedef struct argrec_classifier argrec_classifier;
typedef struct argrec_model argrec_model;
typedef struct argrec_server argrec_server;

typedef struct argrec_hyperparams {
  size_t rank;
  size_t hidden_rank;
  double lambda_x;
  double lambda_y;
  double lambda_u;
  double lambda_h;
  double lambda_v;
  double learning_rate;
  size_t max_epochs;
  uint64_t seed;
  double tol;
} argrec_hyperparams;

ARGREC_API const char* argrec_status_name(argrec_status status);
/* Message of the last failed call on this thread; "" if none. */
ARGREC_API const char* argrec_last_error(void);
ARGREC_API void argrec_string_free(char* s);

/* Classifier. sentiment_path holds "term\tpositive|negative|negation". */
ARGREC_API argrec_status argrec_classifier_create(const char* lexicon_path,
                                                  const char* sentiment_path,
                                                  int gold_passthrough,
                                                  argrec_classifier** out);
ARGREC_API void argrec_classifier_destroy(argrec_classifier* c);
/* {"feature":str|null,"term":str|null,"polarity":str} */
ARGREC_API argrec_status argrec_classify(const argrec_classifier* c, const char* text,
                                         char** out_json);
/* Corpus JSONL -> SentenceRecord JSONL; summary counts per feature/polarity. */
ARGREC_API argrec_status argrec_ingest(const argrec_classifier* c, const char* corpus_path,
                                       const char* records_out, size_t* out_records,
                                       char** out_summary_json);
/* Precision/recall/F1 of the classifier on the corpus's gold labels. */
ARGREC_API argrec_status argrec_classifier_report(const argrec_classifier* c,
                                                  const char* corpus_path, char** out_json);

/* Model. */
ARGREC_API void argrec_hyperparams_default(argrec_hyperparams* h);
/* Ratings from the corpus, attention/quality from the records; seeded
 * 90/10 holdout. The report carries the final objective and holdout RMSE. */
ARGREC_API argrec_status argrec_train(const char* corpus_path, const char* records_path,
                                      const argrec_hyperparams* h, argrec_model** out,
                                      char** out_report_json);
ARGREC_API argrec_status argrec_model_save(const argrec_model* m, const char* path);
ARGREC_API argrec_status argrec_model_load(const char* path, argrec_model** out);
ARGREC_API void argrec_model_destroy(argrec_model* m);
ARGREC_API size_t argrec_model_user_count(const argrec_model* m);
ARGREC_API size_t argrec_model_item_count(const argrec_model* m);
ARGREC_API argrec_status argrec_model_predict(const argrec_model* m, size_t user, size_t item,
                                              double* out);
/* Proxy selection plus ranked list for five stated feature names.
 * {"proxy_user_id":str,"items":[{"item_id","predicted_rating","circles"}]} */
ARGREC_API argrec_status argrec_model_recommend(const argrec_model* m,
                                                const char* const* preferences,
                                                size_t n_preferences, size_t limit,
                                                char** out_json);

/* HTTP service. data_dir holds sessions.jsonl and events.jsonl. */
ARGREC_API argrec_status argrec_server_create(const argrec_model* m, const char* records_path,
                                              const char* data_dir, size_t default_limit,
                                              uint64_t assignment_seed, argrec_server** out);
/* port 0 binds a free port; the bound port is written to out_port. */
ARGREC_API argrec_status argrec_server_bind(argrec_server* s, const char* host, int port,
                                            int* out_port);
/* Blocks until argrec_server_stop is called from another thread. */
ARGREC_API argrec_status argrec_server_run(argrec_server* s);
ARGREC_API void argrec_server_stop(argrec_server* s);
ARGREC_API void argrec_server_destroy(argrec_server* s);

/* Usage statistics and questionnaire analysis; questionnaire_path may be NULL. */
ARGREC_API argrec_status argrec_stats(const char* events_path, const char* sessions_path,
                                      const char* questionnaire_path, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ARGREC_ARGREC_H */
