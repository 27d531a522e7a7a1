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

#include "walkpool/walkpool.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset_io.hpp"
#include "errors.hpp"
#include "heuristics.hpp"
#include "log.hpp"
#include "metrics.hpp"
#include "trainer.hpp"

struct wp_graph {
  walkpool::Graph graph;
};

struct wp_split {
  walkpool::EdgeSplit split;
  wp_graph observed;
};

struct wp_config {
  walkpool::TrainConfig config;
  std::string text;
};

struct wp_embeddings {
  walkpool::NodeFeatures features;
};

struct wp_model {
  walkpool::TrainedModel model;
  std::string config_text;
};

namespace {

thread_local std::string t_last_error;

template <typename Fn>
wp_status guarded(Fn&& fn) {
  try {
    fn();
    return WP_OK;
  } catch (const walkpool::ParseError& e) {
    t_last_error = e.what();
    return WP_ERROR_PARSE;
  } catch (const walkpool::InputError& e) {
    t_last_error = e.what();
    return WP_ERROR_INPUT;
  } catch (const walkpool::IoError& e) {
    t_last_error = e.what();
    return WP_ERROR_IO;
  } catch (const std::filesystem::filesystem_error& e) {
    t_last_error = e.what();
    return WP_ERROR_IO;
  } catch (const walkpool::RuntimeFailure& e) {
    t_last_error = e.what();
    return WP_ERROR_RUNTIME;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return WP_ERROR_RUNTIME;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return WP_ERROR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return WP_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw walkpool::InputError(what);
}

walkpool::NodeId to_internal(const walkpool::Graph& g, std::int64_t id) {
  const auto internal = g.internal_id(id);
  if (!internal) throw walkpool::InputError("unknown node id " + std::to_string(id));
  return *internal;
}

std::vector<walkpool::NodePair> to_internal_pairs(const walkpool::Graph& g, const int64_t* pairs, size_t n) {
  std::vector<walkpool::NodePair> out;
  out.reserve(n);
  for (size_t k = 0; k < n; ++k) out.emplace_back(to_internal(g, pairs[2 * k]), to_internal(g, pairs[2 * k + 1]));
  return out;
}

const std::vector<walkpool::NodePair>& tier_of(const walkpool::EdgeSplit& s, wp_tier tier, int negative) {
  switch (tier) {
    case WP_TIER_TRAIN: return negative ? s.train_neg : s.train_pos;
    case WP_TIER_VAL: return negative ? s.val_neg : s.val_pos;
    case WP_TIER_TEST: return negative ? s.test_neg : s.test_pos;
  }
  throw walkpool::InputError("unknown tier");
}

walkpool::HeuristicParams to_params(const wp_heuristic_params* p) {
  walkpool::HeuristicParams out;
  if (!p) return out;
  out.katz_beta = p->katz_beta;
  out.katz_lmax = p->katz_lmax;
  out.pr_alpha = p->pr_alpha;
  out.pr_iters = p->pr_iters;
  out.pr_tol = p->pr_tol;
  return out;
}

wp_eval_result to_c(const walkpool::EvalResult& r) {
  return {r.auc, r.ap, r.precision_at_half, r.n_pos, r.n_neg};
}

const walkpool::NodeFeatures* features_of(const wp_embeddings* e) { return e ? &e->features : nullptr; }

}  // namespace

extern "C" {

const char* wp_version(void) { return "1.0.0"; }

const char* wp_last_error(void) { return t_last_error.c_str(); }

void wp_set_log_level(wp_log_level level) {
  walkpool::log::set_level(static_cast<walkpool::log::Level>(level));
}

wp_status wp_graph_load(const char* path, wp_graph** out) {
  return guarded([&] {
    require(path && out, "wp_graph_load: null argument");
    *out = new wp_graph{walkpool::load_edge_list(path)};
  });
}

wp_status wp_graph_from_edges(size_t num_nodes, const int64_t* pairs, size_t num_edges, wp_graph** out) {
  return guarded([&] {
    require(out && (pairs || num_edges == 0), "wp_graph_from_edges: null argument");
    std::vector<walkpool::NodePair> edges;
    edges.reserve(num_edges);
    for (size_t k = 0; k < num_edges; ++k) {
      const int64_t u = pairs[2 * k];
      const int64_t v = pairs[2 * k + 1];
      require(u >= 0 && v >= 0 && static_cast<size_t>(u) < num_nodes && static_cast<size_t>(v) < num_nodes,
              "wp_graph_from_edges: node id out of range");
      edges.emplace_back(static_cast<walkpool::NodeId>(u), static_cast<walkpool::NodeId>(v));
    }
    *out = new wp_graph{walkpool::build_graph(num_nodes, edges)};
  });
}

void wp_graph_free(wp_graph* g) { delete g; }

size_t wp_graph_num_nodes(const wp_graph* g) { return g ? g->graph.num_nodes() : 0; }

size_t wp_graph_num_edges(const wp_graph* g) { return g ? g->graph.edge_count() : 0; }

double wp_graph_average_clustering(const wp_graph* g) { return g ? walkpool::average_clustering(g->graph) : 0.0; }

wp_status wp_split_create(const wp_graph* g, double test_ratio, double val_ratio, uint64_t seed, wp_split** out) {
  return guarded([&] {
    require(g && out, "wp_split_create: null argument");
    auto split = walkpool::split_edges(g->graph, test_ratio, val_ratio, seed);
    wp_graph observed{split.observed_graph};
    *out = new wp_split{std::move(split), std::move(observed)};
  });
}

wp_status wp_split_save(const wp_split* s, const char* dir) {
  return guarded([&] {
    require(s && dir, "wp_split_save: null argument");
    walkpool::save_split(s->split, dir);
  });
}

wp_status wp_split_load(const char* dir, wp_split** out) {
  return guarded([&] {
    require(dir && out, "wp_split_load: null argument");
    auto split = walkpool::load_split(dir);
    wp_graph observed{split.observed_graph};
    *out = new wp_split{std::move(split), std::move(observed)};
  });
}

void wp_split_free(wp_split* s) { delete s; }

size_t wp_split_tier_size(const wp_split* s, wp_tier tier, int negative) {
  if (!s || tier < WP_TIER_TRAIN || tier > WP_TIER_TEST) return 0;
  return tier_of(s->split, tier, negative).size();
}

uint64_t wp_split_seed(const wp_split* s) { return s ? s->split.seed : 0; }

wp_status wp_split_tier_pairs(const wp_split* s, wp_tier tier, int negative, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(s && out, "wp_split_tier_pairs: null argument");
    const auto& pairs = tier_of(s->split, tier, negative);
    require(capacity >= 2 * pairs.size(), "wp_split_tier_pairs: output buffer too small");
    const auto& g = s->split.observed_graph;
    for (size_t k = 0; k < pairs.size(); ++k) {
      out[2 * k] = g.original_id(pairs[k].first);
      out[2 * k + 1] = g.original_id(pairs[k].second);
    }
  });
}

const wp_graph* wp_split_observed_graph(const wp_split* s) { return s ? &s->observed : nullptr; }

wp_heuristic_params wp_heuristic_params_default(void) {
  const walkpool::HeuristicParams d;
  return {d.katz_beta, d.katz_lmax, d.pr_alpha, d.pr_iters, d.pr_tol};
}

wp_status wp_heuristic_score(const wp_graph* g, const char* method, const wp_heuristic_params* params,
                             const int64_t* pairs, size_t n, double* out_scores) {
  return guarded([&] {
    require(g && method && (pairs || n == 0) && (out_scores || n == 0), "wp_heuristic_score: null argument");
    const auto m = walkpool::parse_heuristic(method);
    const auto internal = to_internal_pairs(g->graph, pairs, n);
    const auto scores = walkpool::score_pairs(g->graph, m, internal, to_params(params));
    for (size_t k = 0; k < n; ++k) out_scores[k] = scores[k].value;
  });
}

wp_status wp_heuristic_evaluate(const wp_split* s, const char* method, const wp_heuristic_params* params,
                                wp_eval_result* out) {
  return guarded([&] {
    require(s && method && out, "wp_heuristic_evaluate: null argument");
    const auto m = walkpool::parse_heuristic(method);
    const auto p = to_params(params);
    const auto& g = s->split.observed_graph;
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto& r : walkpool::score_pairs(g, m, s->split.test_pos, p)) pos.push_back(r.value);
    for (const auto& r : walkpool::score_pairs(g, m, s->split.test_neg, p)) neg.push_back(r.value);
    *out = to_c(walkpool::evaluate(pos, neg));
  });
}

wp_status wp_metrics_evaluate(const double* pos, size_t n_pos, const double* neg, size_t n_neg, wp_eval_result* out) {
  return guarded([&] {
    require(out && (pos || n_pos == 0) && (neg || n_neg == 0), "wp_metrics_evaluate: null argument");
    *out = to_c(walkpool::evaluate({pos, n_pos}, {neg, n_neg}));
  });
}

wp_status wp_config_create(wp_config** out) {
  return guarded([&] {
    require(out, "wp_config_create: null argument");
    *out = new wp_config{};
  });
}

wp_status wp_config_load(const char* path, wp_config** out) {
  return guarded([&] {
    require(path && out, "wp_config_load: null argument");
    *out = new wp_config{walkpool::load_config(path), {}};
  });
}

wp_status wp_config_set(wp_config* c, const char* key, const char* value) {
  return guarded([&] {
    require(c && key && value, "wp_config_set: null argument");
    c->config.set(key, value);
  });
}

const char* wp_config_text(wp_config* c) {
  if (!c) return "";
  c->text = c->config.to_text();
  return c->text.c_str();
}

void wp_config_free(wp_config* c) { delete c; }

wp_status wp_embeddings_load(const char* path, const wp_graph* g, wp_embeddings** out) {
  return guarded([&] {
    require(path && g && out, "wp_embeddings_load: null argument");
    *out = new wp_embeddings{walkpool::load_embeddings(path, g->graph)};
  });
}

void wp_embeddings_free(wp_embeddings* e) { delete e; }

wp_status wp_train(const wp_split* s, const wp_config* c, const wp_embeddings* embeddings, wp_epoch_callback callback,
                   void* user, wp_model** out) {
  return guarded([&] {
    require(s && c && out, "wp_train: null argument");
    walkpool::EpochCallback on_epoch;
    if (callback) {
      on_epoch = [callback, user](const walkpool::EpochLog& row) {
        const wp_epoch_record rec{row.epoch, row.train_loss, row.val_auc};
        callback(&rec, user);
      };
    }
    auto model = walkpool::train(s->split, c->config, features_of(embeddings), on_epoch);
    std::string text = model.config.to_text();
    *out = new wp_model{std::move(model), std::move(text)};
  });
}

wp_status wp_model_save(const wp_model* m, const char* path) {
  return guarded([&] {
    require(m && path, "wp_model_save: null argument");
    walkpool::save_checkpoint(walkpool::to_checkpoint(m->model), path);
  });
}

wp_status wp_model_load(const char* path, wp_model** out) {
  return guarded([&] {
    require(path && out, "wp_model_load: null argument");
    auto model = walkpool::from_checkpoint(walkpool::load_checkpoint(path));
    std::string text = model.config.to_text();
    *out = new wp_model{std::move(model), std::move(text)};
  });
}

void wp_model_free(wp_model* m) { delete m; }

size_t wp_model_selected_epoch(const wp_model* m) { return m ? m->model.selected_epoch : 0; }

double wp_model_selection_metric(const wp_model* m) { return m ? m->model.selection_metric : 0.0; }

const char* wp_model_config_text(const wp_model* m) { return m ? m->config_text.c_str() : ""; }

wp_status wp_model_evaluate(const wp_model* m, const wp_split* s, const wp_embeddings* embeddings,
                            wp_eval_result* out) {
  return guarded([&] {
    require(m && s && out, "wp_model_evaluate: null argument");
    *out = to_c(walkpool::evaluate_model(m->model, s->split, features_of(embeddings)));
  });
}

wp_status wp_model_predict(const wp_model* m, const wp_split* s, const wp_embeddings* embeddings,
                           const int64_t* pairs, size_t n, double* out_probs) {
  return guarded([&] {
    require(m && s && (pairs || n == 0) && (out_probs || n == 0), "wp_model_predict: null argument");
    const auto& g = s->split.observed_graph;
    const auto internal = to_internal_pairs(g, pairs, n);
    const auto probs = walkpool::predict(m->model, g, internal, features_of(embeddings));
    for (size_t k = 0; k < n; ++k) out_probs[k] = probs[k];
  });
}

}  // extern "C"
