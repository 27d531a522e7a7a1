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

#include <span>
#include <string>
#include <vector>

#include "graph_core.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace walkpool::ad {

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out
};

/// Affine layers with ReLU between them; the last layer stays affine.
struct Mlp {
  std::vector<Linear> layers;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  static Mlp init(std::span<const std::size_t> sizes, Rng& rng);

  std::size_t input_dim() const { return layers.front().weight.rows(); }
  std::size_t output_dim() const { return layers.back().weight.cols(); }
  std::vector<Tensor> parameters() const;
};

Tensor mlp_forward(const Mlp& mlp, const Tensor& x);

/// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
DenseMatrix normalized_adjacency(const Graph& g);

/// relu(norm_adj * z * w).
Tensor gcn_layer(const DenseMatrix& norm_adj, const Tensor& z, const Tensor& w);
Tensor gcn_layer(const Graph& g, const Tensor& z, const Tensor& w);

DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng& rng);

struct AdamOptions {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // L2 term added to the gradient
};

struct AdamState {
  std::vector<DenseMatrix> m;
  std::vector<DenseMatrix> v;
  std::size_t step = 0;
};

/// One bias-corrected Adam update of `params` from their accumulated
/// gradients. State is sized lazily on the first call.
void adam_step(std::span<Tensor> params, AdamState& state, const AdamOptions& opts);

}  // namespace walkpool::ad
