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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "checkpoint.hpp"
#include "config.hpp"
#include "dataset_io.hpp"
#include "metrics.hpp"
#include "nn.hpp"
#include "subgraph.hpp"
#include "walkpool.hpp"

namespace walkpool {

/// All trainable tensors. Shapes, with F0 the initial feature width and
/// F' = F0 + gcn_hidden + gcn_out:
///   gcn.0                   F0 x gcn_hidden
///   gcn.1                   gcn_hidden x gcn_out
///   head<h>.{q,k}.{w,b}<l>  F' -> attention_mlp_hidden -> attention_mlp_out
///   cls.{w,b}<l>            classifier_sizes()
struct ModelParams {
  std::vector<ad::Tensor> gcn;
  std::vector<AttentionHead> heads;
  ad::Mlp classifier;

  static ModelParams init(const TrainConfig& cfg, std::size_t input_dim, std::uint64_t seed);

  std::vector<std::pair<std::string, ad::Tensor>> named() const;
  std::vector<ad::Tensor> tensors() const;
  // Fresh leaves holding copies of the current values.
  ModelParams clone() const;
};

struct TrainedModel {
  ModelParams params;
  TrainConfig config;
  std::size_t input_dim = 0;
  std::size_t selected_epoch = 0;
  double selection_metric = 0.0;  // validation AUC of the selected epoch
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_auc = 0.0;
};

/// A labeled enclosing subgraph ready for the feature pipeline.
struct Sample {
  SubgraphVariant variant;
  double label = 0.0;
};

Sample make_sample(const Graph& observed, NodePair pair, double label, const TrainConfig& cfg);
std::vector<Sample> make_samples(const Graph& observed, std::span<const NodePair> pairs, double label,
                                 const TrainConfig& cfg);

/// Z0 for a subgraph: ones, one-hot distance labels, or the external rows of
/// the subgraph's nodes.
DenseMatrix initial_features(const EnclosingSubgraph& sub, const TrainConfig& cfg, const NodeFeatures* external);

/// [Z0 | Z1 | Z2] with Z1, Z2 from two GCN layers on the subgraph's G-.
ad::Tensor node_features_for(const EnclosingSubgraph& sub, const TrainConfig& cfg, const ModelParams& params,
                             const NodeFeatures* external);

/// Stacked walk-profile rows for the samples, B x feature_length.
ad::Tensor feature_rows(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                        const NodeFeatures* external);

/// Classifier probabilities, B x 1.
ad::Tensor forward(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                   const NodeFeatures* external);

/// Mean squared error of the batch.
ad::Tensor batch_loss(std::span<const Sample* const> batch, const ModelParams& params, const TrainConfig& cfg,
                      const NodeFeatures* external);

/// One Adam step on the batch; returns the loss before the update.
double train_step(std::span<const Sample* const> batch, ModelParams& params, ad::AdamState& state,
                  const TrainConfig& cfg, const NodeFeatures* external);

using EpochCallback = std::function<void(const EpochLog&)>;

/// Supervised training on train_pos (label 1) and train_neg (label 0), with
/// subgraphs drawn from the observed graph. After every epoch the validation
/// AUC is measured; the returned parameters are those of the best validation
/// epoch (earliest on ties), or of the last epoch for select=final.
TrainedModel train(const EdgeSplit& split, const TrainConfig& cfg, const NodeFeatures* external = nullptr,
                   const EpochCallback& on_epoch = {});

/// Probability per internal-id pair. Pairs are oriented (min, max) before
/// extraction, so the result does not depend on orientation.
std::vector<double> predict(const TrainedModel& model, const Graph& observed, std::span<const NodePair> pairs,
                            const NodeFeatures* external = nullptr);

/// Scores the test tier of a split.
EvalResult evaluate_model(const TrainedModel& model, const EdgeSplit& split, const NodeFeatures* external = nullptr);

Checkpoint to_checkpoint(const TrainedModel& model);
TrainedModel from_checkpoint(const Checkpoint& ckpt);

/// "epoch,train_loss,val_auc" header plus one row per epoch.
std::string training_log_csv(std::span<const EpochLog> rows);

}  // namespace walkpool
