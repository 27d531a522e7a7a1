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

#include "trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "log.hpp"
#include "rng.hpp"

namespace walkpool {

namespace {

// Stream tags for Rng::derive so each consumer of the seed is independent.
constexpr std::uint64_t kInitStream = 0x696e6974;     // "init"
constexpr std::uint64_t kShuffleStream = 0x73687566;  // "shuf"

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void add_mlp(std::vector<std::pair<std::string, ad::Tensor>>& out, const std::string& prefix, const ad::Mlp& mlp) {
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    out.emplace_back(prefix + ".w" + std::to_string(l), mlp.layers[l].weight);
    out.emplace_back(prefix + ".b" + std::to_string(l), mlp.layers[l].bias);
  }
}

ad::Mlp clone_mlp(const ad::Mlp& mlp) {
  ad::Mlp out;
  for (const auto& l : mlp.layers) {
    out.layers.push_back({ad::Tensor::parameter(l.weight.value()), ad::Tensor::parameter(l.bias.value())});
  }
  return out;
}

std::vector<const Sample*> pointers(const std::vector<Sample>& samples) {
  std::vector<const Sample*> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(&s);
  return out;
}

std::vector<double> predict_samples(std::span<const Sample* const> samples, const ModelParams& params,
                                    const TrainConfig& cfg, const NodeFeatures* external) {
  ad::NoGradGuard no_grad;
  std::vector<double> out;
  out.reserve(samples.size());
  const std::size_t chunk = std::max<std::size_t>(cfg.batch_size, 1);
  for (std::size_t at = 0; at < samples.size(); at += chunk) {
    const auto part = samples.subspan(at, std::min(chunk, samples.size() - at));
    const ad::Tensor probs = forward(part, params, cfg, external);
    for (double p : probs.value().data()) out.push_back(p);
  }
  return out;
}

double validation_auc(std::span<const Sample* const> pos, std::span<const Sample* const> neg,
                      const ModelParams& params, const TrainConfig& cfg, const NodeFeatures* external) {
  const auto p = predict_samples(pos, params, cfg, external);
  const auto n = predict_samples(neg, params, cfg, external);
  return auc(p, n);
}

std::size_t input_dim_for(const TrainConfig& cfg, const NodeFeatures* external) {
  if (cfg.init_mode == InitMode::file) {
    if (!external) throw InputError("init_mode=file requires node embeddings");
    return external->dim();
  }
  return cfg.init_dim;
}

}  // namespace

ModelParams ModelParams::init(const TrainConfig& cfg, std::size_t input_dim, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, kInitStream));
  ModelParams p;
  auto glorot = [&](std::size_t in, std::size_t out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    return ad::Tensor::parameter(ad::uniform_matrix(in, out, bound, rng));
  };
  p.gcn.push_back(glorot(input_dim, cfg.gcn_hidden));
  p.gcn.push_back(glorot(cfg.gcn_hidden, cfg.gcn_out));
  const std::size_t width = input_dim + cfg.gcn_hidden + cfg.gcn_out;
  const std::size_t sizes[] = {width, cfg.attention_mlp_hidden, cfg.attention_mlp_out};
  for (std::size_t h = 0; h < cfg.heads; ++h) {
    AttentionHead head;
    head.query = ad::Mlp::init(sizes, rng);
    head.key = ad::Mlp::init(sizes, rng);
    p.heads.push_back(std::move(head));
  }
  p.classifier = ad::Mlp::init(cfg.classifier_sizes(), rng);
  return p;
}

std::vector<std::pair<std::string, ad::Tensor>> ModelParams::named() const {
  std::vector<std::pair<std::string, ad::Tensor>> out;
  for (std::size_t l = 0; l < gcn.size(); ++l) out.emplace_back("gcn." + std::to_string(l), gcn[l]);
  for (std::size_t h = 0; h < heads.size(); ++h) {
    add_mlp(out, "head" + std::to_string(h) + ".q", heads[h].query);
    add_mlp(out, "head" + std::to_string(h) + ".k", heads[h].key);
  }
  add_mlp(out, "cls", classifier);
  return out;
}

std::vector<ad::Tensor> ModelParams::tensors() const {
  std::vector<ad::Tensor> out;
  for (auto& [name, t] : named()) out.push_back(t);
  return out;
}

ModelParams ModelParams::clone() const {
  ModelParams p;
  for (const auto& w : gcn) p.gcn.push_back(ad::Tensor::parameter(w.value()));
  for (const auto& h : heads) p.heads.push_back({clone_mlp(h.query), clone_mlp(h.key)});
  p.classifier = clone_mlp(classifier);
  return p;
}

Sample make_sample(const Graph& observed, NodePair pair, double label, const TrainConfig& cfg) {
  return {make_variants(extract_enclosing(observed, pair, cfg.k_hops, cfg.max_per_hop, cfg.seed, label > 0.5)),
          label};
}

std::vector<Sample> make_samples(const Graph& observed, std::span<const NodePair> pairs, double label,
                                 const TrainConfig& cfg) {
  std::vector<Sample> out;
  out.reserve(pairs.size());
  for (const auto& pr : pairs) out.push_back(make_sample(observed, pr, label, cfg));
  return out;
}

DenseMatrix initial_features(const EnclosingSubgraph& sub, const TrainConfig& cfg, const NodeFeatures* external) {
  switch (cfg.init_mode) {
    case InitMode::ones: return DenseMatrix(sub.num_nodes(), cfg.init_dim, 1.0);
    case InitMode::distance_labels: return distance_labels(sub, cfg.init_dim).rows;
    case InitMode::file: {
      if (!external) throw InputError("init_mode=file requires node embeddings");
      DenseMatrix z0(sub.num_nodes(), external->dim());
      for (std::size_t v = 0; v < sub.num_nodes(); ++v) {
        const NodeId global = sub.node_map[v];
        if (global >= external->num_nodes()) throw InputError("embeddings do not cover node " + std::to_string(global));
        const auto src = external->rows.row(global);
        std::copy(src.begin(), src.end(), z0.row(v).begin());
      }
      return z0;
    }
  }
  throw InputError("unknown init mode");
}

ad::Tensor node_features_for(const EnclosingSubgraph& sub, const TrainConfig& cfg, const ModelParams& params,
                             const NodeFeatures* external) {
  const ad::Tensor z0 = ad::Tensor::constant(initial_features(sub, cfg, external));
  const DenseMatrix norm = ad::normalized_adjacency(sub.local_graph);
  const ad::Tensor z1 = ad::gcn_layer(norm, z0, params.gcn.at(0));
  const ad::Tensor z2 = ad::gcn_layer(norm, z1, params.gcn.at(1));
  const ad::Tensor parts[] = {z0, z1, z2};
  return ad::concat_cols(parts);
}

ad::Tensor feature_rows(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                        const NodeFeatures* external) {
  if (batch.empty()) throw InputError("feature_rows: empty batch");
  std::vector<ad::Tensor> rows;
  rows.reserve(batch.size());
  for (const Sample* s : batch) {
    const ad::Tensor z = node_features_for(s->variant.base, cfg, params, external);
    rows.push_back(wp_features(s->variant, z, params.heads, cfg.tau_c, cfg.features));
  }
  return rows.size() == 1 ? rows.front() : ad::concat_rows(rows);
}

ad::Tensor forward(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                   const NodeFeatures* external) {
  return classify(feature_rows(batch, params, cfg, external), params.classifier);
}

ad::Tensor batch_loss(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                      const NodeFeatures* external) {
  DenseMatrix labels(batch.size(), 1);
  for (std::size_t i = 0; i < batch.size(); ++i) labels(i, 0) = batch[i]->label;
  return ad::mse_loss(forward(batch, params, cfg, external), labels);
}

double train_step(std::span<const Sample* const> batch, ModelParams& params, ad::AdamState& state,
                  const TrainConfig& cfg, const NodeFeatures* external) {
  auto tensors = params.tensors();
  for (auto& t : tensors) t.zero_grad();
  const ad::Tensor loss = batch_loss(batch, params, cfg, external);
  ad::backward(loss);
  ad::adam_step(tensors, state, {cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});
  return loss.item();
}

TrainedModel train(const EdgeSplit& split, const TrainConfig& cfg, const NodeFeatures* external,
                   const EpochCallback& on_epoch) {
  cfg.validate();
  if (split.train_pos.empty() || split.train_neg.empty()) {
    throw InputError("train: the split has an empty training tier");
  }
  const bool select_best = cfg.select == SelectMode::best_val;
  if (select_best && (split.val_pos.empty() || split.val_neg.empty())) {
    throw InputError("train: select=best_val needs non-empty validation tiers (or use select=final)");
  }
  const std::size_t input_dim = input_dim_for(cfg, external);
  const Graph& observed = split.observed_graph;

  std::vector<Sample> samples = make_samples(observed, split.train_pos, 1.0, cfg);
  {
    auto neg = make_samples(observed, split.train_neg, 0.0, cfg);
    std::move(neg.begin(), neg.end(), std::back_inserter(samples));
  }
  const auto val_pos = make_samples(observed, split.val_pos, 1.0, cfg);
  const auto val_neg = make_samples(observed, split.val_neg, 0.0, cfg);
  const auto val_pos_ptr = pointers(val_pos);
  const auto val_neg_ptr = pointers(val_neg);

  TrainedModel model;
  model.config = cfg;
  model.input_dim = input_dim;
  model.params = ModelParams::init(cfg, input_dim, cfg.seed);

  ad::AdamState adam;
  Rng shuffle_rng(Rng::derive(cfg.seed, kShuffleStream));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  ModelParams best;
  double best_auc = -1.0;
  std::size_t best_epoch = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::vector<const Sample*> batch;
    for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
      batch.clear();
      const std::size_t end = std::min(order.size(), at + cfg.batch_size);
      for (std::size_t i = at; i < end; ++i) batch.push_back(&samples[order[i]]);
      loss_sum += train_step(batch, model.params, adam, cfg, external) * static_cast<double>(batch.size());
    }
    EpochLog row;
    row.epoch = epoch;
    row.train_loss = loss_sum / static_cast<double>(samples.size());
    row.val_auc = val_pos.empty() || val_neg.empty()
                      ? std::nan("")
                      : validation_auc(val_pos_ptr, val_neg_ptr, model.params, cfg, external);
    log::info("epoch " + std::to_string(epoch) + " loss " + format_real(row.train_loss) + " val_auc " +
              format_real(row.val_auc));
    if (on_epoch) on_epoch(row);
    if (select_best && row.val_auc > best_auc) {
      best_auc = row.val_auc;
      best_epoch = epoch;
      best = model.params.clone();
    }
    if (!select_best) {
      best_auc = row.val_auc;
      best_epoch = epoch;
    }
  }
  if (select_best) model.params = std::move(best);
  model.selected_epoch = best_epoch;
  model.selection_metric = best_auc;
  return model;
}

std::vector<double> predict(const TrainedModel& model, const Graph& observed, std::span<const NodePair> pairs,
                            const NodeFeatures* external) {
  std::vector<Sample> samples;
  samples.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    if (u >= observed.num_nodes() || v >= observed.num_nodes()) throw InputError("predict: unknown node id");
    samples.push_back(make_sample(observed, {std::min(u, v), std::max(u, v)}, 0.0, model.config));
  }
  return predict_samples(pointers(samples), model.params, model.config, external);
}

EvalResult evaluate_model(const TrainedModel& model, const EdgeSplit& split, const NodeFeatures* external) {
  const auto pos = predict(model, split.observed_graph, split.test_pos, external);
  const auto neg = predict(model, split.observed_graph, split.test_neg, external);
  return evaluate(pos, neg);
}

Checkpoint to_checkpoint(const TrainedModel& model) {
  Checkpoint ckpt;
  ckpt.header = model.config.to_text() + "#model\n" + "input_dim=" + std::to_string(model.input_dim) + '\n' +
                "selected_epoch=" + std::to_string(model.selected_epoch) + '\n' +
                "selection_metric=" + format_real(model.selection_metric) + '\n';
  for (auto& [name, t] : model.params.named()) ckpt.tensors.emplace_back(name, t.value());
  return ckpt;
}

TrainedModel from_checkpoint(const Checkpoint& ckpt) {
  TrainedModel model;
  std::string config_text;
  std::istringstream in(ckpt.header);
  std::string line;
  bool in_model = false;
  while (std::getline(in, line)) {
    if (line == "#model") {
      in_model = true;
      continue;
    }
    if (!in_model) {
      config_text += line + '\n';
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "input_dim") {
      model.input_dim = std::stoull(value);
    } else if (key == "selected_epoch") {
      model.selected_epoch = std::stoull(value);
    } else if (key == "selection_metric") {
      std::from_chars(value.data(), value.data() + value.size(), model.selection_metric);
    }
  }
  if (!in_model || model.input_dim == 0) throw ParseError("checkpoint header lacks model metadata");
  model.config = parse_config(config_text, "checkpoint header");
  model.params = ModelParams::init(model.config, model.input_dim, 0);
  auto named = model.params.named();
  if (named.size() != ckpt.tensors.size()) {
    throw ParseError("checkpoint holds " + std::to_string(ckpt.tensors.size()) + " tensors, config implies " +
                     std::to_string(named.size()));
  }
  for (std::size_t k = 0; k < named.size(); ++k) {
    auto& [name, tensor] = named[k];
    const auto& [saved_name, saved] = ckpt.tensors[k];
    if (saved_name != name || saved.rows() != tensor.rows() || saved.cols() != tensor.cols()) {
      throw ParseError("checkpoint tensor '" + saved_name + "' does not match expected '" + name + "'");
    }
    tensor.mutable_value() = saved;
  }
  return model;
}

std::string training_log_csv(std::span<const EpochLog> rows) {
  std::string out = "epoch,train_loss,val_auc\n";
  for (const auto& r : rows) {
    out += std::to_string(r.epoch) + ',' + format_real(r.train_loss) + ',' + format_real(r.val_auc) + '\n';
  }
  return out;
}

}  // namespace walkpool
