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

#include "walkpool.hpp"

#include <cmath>

#include "errors.hpp"

namespace walkpool {

FeatureMask FeatureMask::excluding(std::string_view list) {
  FeatureMask mask;
  while (!list.empty()) {
    const auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "omega") {
      mask.omega = false;
    } else if (item == "node") {
      mask.node = false;
    } else if (item == "link") {
      mask.link = false;
    } else if (item == "graph") {
      mask.graph = false;
    } else if (!item.empty() && item != "none") {
      throw InputError("unknown feature group '" + std::string(item) + "' (expected omega, node, link, graph)");
    }
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
  }
  if (!mask.any()) throw InputError("feature mask excludes every group");
  return mask;
}

std::string FeatureMask::excluded_list() const {
  std::string out;
  auto add = [&](bool included, const char* name) {
    if (included) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(omega, "omega");
  add(node, "node");
  add(link, "link");
  add(graph, "graph");
  return out;
}

std::size_t walk_profile_length(std::size_t heads, unsigned tau_c, const FeatureMask& mask) {
  const std::size_t per_tau = (mask.node ? 2 : 0) + (mask.link ? 2 : 0) + (mask.graph ? 1 : 0);
  const std::size_t walks = tau_c >= 2 ? per_tau * (tau_c - 1) : 0;
  return heads * ((mask.omega ? 1 : 0) + walks);
}

ad::Tensor edge_scores(const ad::Tensor& z, const AttentionHead& head) {
  const ad::Tensor q = ad::mlp_forward(head.query, z);
  const ad::Tensor k = ad::mlp_forward(head.key, z);
  if (q.cols() != k.cols()) {
    throw InputError("edge_scores: query width " + std::to_string(q.cols()) + " != key width " +
                     std::to_string(k.cols()));
  }
  return ad::scale(ad::matmul_nt(q, k), 1.0 / std::sqrt(static_cast<double>(q.cols())));
}

ad::Tensor attention_transition(const Graph& adjacency, const ad::Tensor& scores) {
  if (scores.rows() != adjacency.num_nodes() || scores.cols() != adjacency.num_nodes()) {
    throw InputError("attention_transition: scores do not match the adjacency size");
  }
  return ad::masked_softmax(scores, adjacency_matrix(adjacency));
}

ad::Tensor walk_readout(const ad::Tensor& power) {
  const DenseMatrix& x = power.value();
  if (x.rows() != x.cols() || x.rows() < 2) {
    throw InputError("walk_readout: need a square matrix with at least the two focal nodes");
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) tr += x(i, i);
  DenseMatrix out(1, 3);
  out(0, 0) = x(0, 0) + x(1, 1);
  out(0, 1) = x(0, 1) + x(1, 0);
  out(0, 2) = tr;
  return ad::Tensor::make(std::move(out), {power}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    DenseMatrix& d = *in[0];
    d(0, 0) += g(0, 0);
    d(1, 1) += g(0, 0);
    d(0, 1) += g(0, 1);
    d(1, 0) += g(0, 1);
    for (std::size_t i = 0; i < d.rows(); ++i) d(i, i) += g(0, 2);
  });
}

std::vector<ad::Tensor> walk_profile_features(const ad::Tensor& p, unsigned tau_c) {
  if (p.rows() != p.cols()) throw InputError("walk_profile_features: transition matrix must be square");
  std::vector<ad::Tensor> out;
  ad::Tensor power = p;
  for (unsigned tau = 2; tau <= tau_c; ++tau) {
    power = ad::matmul(power, p);
    out.push_back(walk_readout(power));
  }
  return out;
}

namespace {

// 1x2 [R00 + R11, R01 + R10] of a 2 x n block holding rows 0 and 1 of P^tau.
ad::Tensor focal_rows_readout(const ad::Tensor& r) {
  const DenseMatrix& x = r.value();
  DenseMatrix out(1, 2);
  out(0, 0) = x(0, 0) + x(1, 1);
  out(0, 1) = x(0, 1) + x(1, 0);
  return ad::Tensor::make(std::move(out), {r}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    DenseMatrix& d = *in[0];
    d(0, 0) += g(0, 0);
    d(1, 1) += g(0, 0);
    d(0, 1) += g(0, 1);
    d(1, 0) += g(0, 1);
  });
}

// 1 x (rows/2): entry m is X[2m][0] + X[2m+1][1].
ad::Tensor focal_diagonal_pairs(const ad::Tensor& x) {
  const std::size_t pairs = x.rows() / 2;
  DenseMatrix out(1, pairs);
  for (std::size_t m = 0; m < pairs; ++m) out(0, m) = x.value()(2 * m, 0) + x.value()(2 * m + 1, 1);
  return ad::Tensor::make(std::move(out), {x}, [pairs](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    DenseMatrix& d = *in[0];
    for (std::size_t m = 0; m < pairs; ++m) {
      d(2 * m, 0) += g(0, m);
      d(2 * m + 1, 1) += g(0, m);
    }
  });
}

std::vector<std::size_t> first_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t r = 0; r < n; ++r) rows[r] = r;
  return rows;
}

// Walk features of one head in the masked layout.
//
// Node and link entries need only rows 0 and 1 of P^tau, carried as a 2 x n
// block. For the graph entry, with A = P+, B = P- and E = A - B (nonzero
// only in rows 0 and 1),
//   tr A^tau - tr B^tau = sum_{m+k=tau-1} sum_f [E B^m A^k]_{f,f},
// so the difference never needs a full matrix power.
ad::Tensor head_features(const SubgraphVariant& variant, const ad::Tensor& scores, unsigned tau_c,
                         const FeatureMask& mask) {
  const std::size_t steps = tau_c >= 2 ? tau_c - 1 : 0;
  const bool walks = steps > 0 && (mask.node || mask.link || mask.graph);

  std::vector<ad::Tensor> raw;
  std::vector<std::vector<std::pair<std::size_t, double>>> columns;  // raw index, weight
  std::size_t raw_width = 0;
  auto push = [&](const ad::Tensor& t) {
    raw.push_back(t);
    const std::size_t at = raw_width;
    raw_width += t.cols();
    return at;
  };

  if (mask.omega) {
    const std::size_t a = push(ad::element(scores, 0, 1));
    const std::size_t b = push(ad::element(scores, 1, 0));
    columns.push_back({{a, 0.5}, {b, 0.5}});
  }
  if (!walks) {
    if (raw.empty()) return ad::Tensor::constant(DenseMatrix(1, 0));
    DenseMatrix sel(raw_width, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (auto [r, w] : columns[c]) sel(r, c) = w;
    return ad::matmul(ad::concat_cols(raw), ad::Tensor::constant(std::move(sel)));
  }

  const ad::Tensor p_plus = attention_transition(variant.adjacency_plus, scores);
  const ad::Tensor p_minus = attention_transition(variant.adjacency_minus, scores);
  const auto focal = first_rows(2);
  const ad::Tensor r1_plus = ad::select_rows(p_plus, focal);
  const ad::Tensor r1_minus = ad::select_rows(p_minus, focal);

  std::vector<std::size_t> plus_at(steps), minus_at(steps);
  if (mask.node || mask.link) {
    ad::Tensor rp = r1_plus;
    ad::Tensor rm = r1_minus;
    for (std::size_t t = 0; t < steps; ++t) {
      rp = ad::matmul_pattern(rp, p_plus, variant.adjacency_plus);
      rm = ad::matmul_pattern(rm, p_minus, variant.adjacency_minus);
      plus_at[t] = push(focal_rows_readout(rp));
      minus_at[t] = push(focal_rows_readout(rm));
    }
  }

  // diag_at[k] holds sum_f [E B^m A^k]_{f,f} for m = 0..tau_c-1-k.
  std::vector<std::size_t> diag_at(tau_c);
  if (mask.graph) {
    std::vector<ad::Tensor> w{ad::sub(r1_plus, r1_minus)};
    for (std::size_t m = 1; m < tau_c; ++m) w.push_back(ad::matmul_pattern(w.back(), p_minus, variant.adjacency_minus));
    ad::Tensor x = ad::concat_rows(w);
    diag_at[0] = push(focal_diagonal_pairs(x));
    for (std::size_t k = 1; k < tau_c; ++k) {
      x = ad::matmul_pattern(ad::select_rows(x, first_rows(2 * (tau_c - k))), p_plus, variant.adjacency_plus);
      diag_at[k] = push(focal_diagonal_pairs(x));
    }
  }

  for (std::size_t t = 0; t < steps; ++t) {
    if (mask.node) {
      columns.push_back({{plus_at[t], 1.0}});
      columns.push_back({{minus_at[t], 1.0}});
    }
    if (mask.link) {
      columns.push_back({{plus_at[t] + 1, 1.0}});
      columns.push_back({{minus_at[t] + 1, 1.0}});
    }
    if (mask.graph) {
      const std::size_t tau = t + 2;
      std::vector<std::pair<std::size_t, double>> terms;
      for (std::size_t k = 0; k < tau; ++k) terms.emplace_back(diag_at[k] + (tau - 1 - k), 1.0);
      columns.push_back(std::move(terms));
    }
  }

  DenseMatrix sel(raw_width, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (auto [r, w] : columns[c]) sel(r, c) = w;
  return ad::matmul(ad::concat_cols(raw), ad::Tensor::constant(std::move(sel)));
}

}  // namespace

ad::Tensor wp_features(const SubgraphVariant& variant, const ad::Tensor& z, std::span<const AttentionHead> heads,
                       unsigned tau_c, const FeatureMask& mask) {
  const std::size_t n = variant.base.num_nodes();
  if (z.rows() != n) {
    throw InputError("wp_features: z has " + std::to_string(z.rows()) + " rows for a " + std::to_string(n) +
                     "-node subgraph");
  }
  if (n < 2) throw InputError("wp_features: subgraph lacks the focal pair");
  if (heads.empty()) throw InputError("wp_features: at least one attention head is required");
  if (!mask.any()) throw InputError("wp_features: feature mask excludes every group");

  std::vector<ad::Tensor> per_head;
  per_head.reserve(heads.size());
  for (const auto& head : heads) per_head.push_back(head_features(variant, edge_scores(z, head), tau_c, mask));
  return per_head.size() == 1 ? per_head.front() : ad::concat_cols(per_head);
}

ad::Tensor classify(const ad::Tensor& rows, const ad::Mlp& classifier) {
  if (rows.cols() != classifier.input_dim()) {
    throw InputError("classify: feature width " + std::to_string(rows.cols()) + " but classifier expects " +
                     std::to_string(classifier.input_dim()));
  }
  return ad::sigmoid(ad::mlp_forward(classifier, rows));
}

}  // namespace walkpool
