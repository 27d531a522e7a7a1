/*
  Copyright (c) 2026 The walkpool-lp authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef WALKPOOL_WALKPOOL_H_
#define WALKPOOL_WALKPOOL_H_

/*
  C interface to the walkpool link-prediction library.

  Objects are opaque handles created by wp_*_create/load functions and
  released with the matching wp_*_free. Every fallible call returns a
  wp_status; on failure, wp_last_error() describes the problem for the
  calling thread until its next failing call.

  Node ids crossing this interface are the ids found in the input files
  ("original ids"), never the library's internal numbering.
*/

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WALKPOOL_BUILDING)
#    define WP_API __declspec(dllexport)
#  else
#    define WP_API __declspec(dllimport)
#  endif
#else
#  define WP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wp_status {
  WP_OK = 0,
  WP_ERROR_INPUT = 1,    /* invalid argument or precondition */
  WP_ERROR_PARSE = 2,    /* malformed file or config */
  WP_ERROR_IO = 3,       /* file could not be read or written */
  WP_ERROR_RUNTIME = 4,  /* sampling exhausted, non-convergence, ... */
  WP_ERROR_INTERNAL = 5
} wp_status;

typedef enum wp_tier { WP_TIER_TRAIN = 0, WP_TIER_VAL = 1, WP_TIER_TEST = 2 } wp_tier;

typedef enum wp_log_level {
  WP_LOG_DEBUG = 0,
  WP_LOG_INFO = 1,
  WP_LOG_WARN = 2,
  WP_LOG_ERROR = 3,
  WP_LOG_OFF = 4
} wp_log_level;

typedef struct wp_graph wp_graph;
typedef struct wp_split wp_split;
typedef struct wp_config wp_config;
typedef struct wp_embeddings wp_embeddings;
typedef struct wp_model wp_model;

typedef struct wp_eval_result {
  double auc;
  double ap;                /* ranking average precision */
  double precision_at_half; /* TP / (TP + FP) at threshold 0.5 */
  size_t n_pos;
  size_t n_neg;
} wp_eval_result;

typedef struct wp_heuristic_params {
  double katz_beta;
  uint32_t katz_lmax;
  double pr_alpha;
  uint32_t pr_iters;
  double pr_tol;
} wp_heuristic_params;

typedef struct wp_epoch_record {
  size_t epoch;
  double train_loss;
  double val_auc;
} wp_epoch_record;

typedef void (*wp_epoch_callback)(const wp_epoch_record* record, void* user);

WP_API const char* wp_version(void);
WP_API const char* wp_last_error(void);
WP_API void wp_set_log_level(wp_log_level level);

/* ---- graphs --------------------------------------------------------------- */

WP_API wp_status wp_graph_load(const char* path, wp_graph** out);
/* pairs holds 2*num_edges ids in 0..num_nodes-1 */
WP_API wp_status wp_graph_from_edges(size_t num_nodes, const int64_t* pairs, size_t num_edges, wp_graph** out);
WP_API void wp_graph_free(wp_graph* g);
WP_API size_t wp_graph_num_nodes(const wp_graph* g);
WP_API size_t wp_graph_num_edges(const wp_graph* g);
WP_API double wp_graph_average_clustering(const wp_graph* g);

/* ---- splits --------------------------------------------------------------- */

WP_API wp_status wp_split_create(const wp_graph* g, double test_ratio, double val_ratio, uint64_t seed,
                                 wp_split** out);
WP_API wp_status wp_split_save(const wp_split* s, const char* dir);
WP_API wp_status wp_split_load(const char* dir, wp_split** out);
WP_API void wp_split_free(wp_split* s);
WP_API size_t wp_split_tier_size(const wp_split* s, wp_tier tier, int negative);
WP_API uint64_t wp_split_seed(const wp_split* s);
/* Copies the tier's pairs (original ids) into out[0 .. 2*size). */
WP_API wp_status wp_split_tier_pairs(const wp_split* s, wp_tier tier, int negative, int64_t* out, size_t capacity);
/* Borrowed view of the observed (training) graph; valid while s lives. */
WP_API const wp_graph* wp_split_observed_graph(const wp_split* s);

/* ---- heuristics ----------------------------------------------------------- */

WP_API wp_heuristic_params wp_heuristic_params_default(void);
/* method: "cn", "aa", "katz" or "pr". pairs holds 2*n original ids. */
WP_API wp_status wp_heuristic_score(const wp_graph* g, const char* method, const wp_heuristic_params* params,
                                    const int64_t* pairs, size_t n, double* out_scores);
/* Scores the test tier against the observed graph. */
WP_API wp_status wp_heuristic_evaluate(const wp_split* s, const char* method, const wp_heuristic_params* params,
                                       wp_eval_result* out);

/* ---- metrics -------------------------------------------------------------- */

WP_API wp_status wp_metrics_evaluate(const double* pos, size_t n_pos, const double* neg, size_t n_neg,
                                     wp_eval_result* out);

/* ---- configuration ---------------------------------------------------------- */

WP_API wp_status wp_config_create(wp_config** out);
WP_API wp_status wp_config_load(const char* path, wp_config** out);
WP_API wp_status wp_config_set(wp_config* c, const char* key, const char* value);
/* Canonical key=value text; the pointer stays valid until the next call on c. */
WP_API const char* wp_config_text(wp_config* c);
WP_API void wp_config_free(wp_config* c);

/* ---- embeddings ----------------------------------------------------------- */

WP_API wp_status wp_embeddings_load(const char* path, const wp_graph* g, wp_embeddings** out);
WP_API void wp_embeddings_free(wp_embeddings* e);

/* ---- models --------------------------------------------------------------- */

/* embeddings may be NULL unless init_mode=file; callback may be NULL. */
WP_API wp_status wp_train(const wp_split* s, const wp_config* c, const wp_embeddings* embeddings,
                          wp_epoch_callback callback, void* user, wp_model** out);
WP_API wp_status wp_model_save(const wp_model* m, const char* path);
WP_API wp_status wp_model_load(const char* path, wp_model** out);
WP_API void wp_model_free(wp_model* m);
WP_API size_t wp_model_selected_epoch(const wp_model* m);
WP_API double wp_model_selection_metric(const wp_model* m);
/* Canonical config text of the model; valid while m lives. */
WP_API const char* wp_model_config_text(const wp_model* m);
WP_API wp_status wp_model_evaluate(const wp_model* m, const wp_split* s, const wp_embeddings* embeddings,
                                   wp_eval_result* out);
/* pairs holds 2*n original ids of the split's graph. */
WP_API wp_status wp_model_predict(const wp_model* m, const wp_split* s, const wp_embeddings* embeddings,
                                  const int64_t* pairs, size_t n, double* out_probs);

#ifdef __cplusplus
}
#endif

#endif /* WALKPOOL_WALKPOOL_H_ */
