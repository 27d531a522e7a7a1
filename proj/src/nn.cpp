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

#include "nn.hpp"

#include <cmath>

#include "errors.hpp"

namespace walkpool::ad {

DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-bound, bound);
  return m;
}

Mlp Mlp::init(std::span<const std::size_t> sizes, Rng& rng) {
  if (sizes.size() < 2) throw InputError("Mlp::init: need at least input and output sizes");
  Mlp mlp;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
    Linear layer;
    layer.weight = Tensor::parameter(uniform_matrix(sizes[l], sizes[l + 1], bound, rng));
    layer.bias = Tensor::parameter(uniform_matrix(1, sizes[l + 1], bound, rng));
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

std::vector<Tensor> Mlp::parameters() const {
  std::vector<Tensor> out;
  for (const auto& l : layers) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  return out;
}

Tensor mlp_forward(const Mlp& mlp, const Tensor& x) {
  Tensor h = x;
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    h = add_bias(matmul(h, mlp.layers[l].weight), mlp.layers[l].bias);
    if (l + 1 < mlp.layers.size()) h = relu(h);
  }
  return h;
}

DenseMatrix normalized_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (NodeId v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
  DenseMatrix a(n, n);
  for (NodeId u = 0; u < n; ++u) {
    a(u, u) = inv_sqrt[u] * inv_sqrt[u];
    for (NodeId v : g.neighbors(u)) a(u, v) = inv_sqrt[u] * inv_sqrt[v];
  }
  return a;
}

Tensor gcn_layer(const DenseMatrix& norm_adj, const Tensor& z, const Tensor& w) {
  if (norm_adj.rows() != z.rows()) {
    throw InputError("gcn_layer: adjacency has " + std::to_string(norm_adj.rows()) + " nodes but features have " +
                     std::to_string(z.rows()) + " rows");
  }
  return relu(matmul(Tensor::constant(norm_adj), matmul(z, w)));
}

Tensor gcn_layer(const Graph& g, const Tensor& z, const Tensor& w) {
  return gcn_layer(normalized_adjacency(g), z, w);
}

void adam_step(std::span<Tensor> params, AdamState& state, const AdamOptions& opts) {
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.rows(), p.cols());
      state.v.emplace_back(p.rows(), p.cols());
    }
  }
  if (state.m.size() != params.size()) throw InputError("adam_step: state does not match parameter list");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(opts.beta1, t);
  const double correction2 = 1.0 - std::pow(opts.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& value = params[k].mutable_value().data();
    const auto& grad = params[k].grad().data();
    auto& m = state.m[k].data();
    auto& v = state.v[k].data();
    const bool has_grad = !grad.empty();  // nothing flowed into this parameter
    for (std::size_t e = 0; e < value.size(); ++e) {
      const double g = (has_grad ? grad[e] : 0.0) + opts.weight_decay * value[e];
      m[e] = opts.beta1 * m[e] + (1.0 - opts.beta1) * g;
      v[e] = opts.beta2 * v[e] + (1.0 - opts.beta2) * g * g;
      const double m_hat = m[e] / correction1;
      const double v_hat = v[e] / correction2;
      value[e] -= opts.lr * m_hat / (std::sqrt(v_hat) + opts.eps);
    }
  }
}

}  // namespace walkpool::ad
