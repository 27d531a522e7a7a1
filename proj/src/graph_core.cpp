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

#include "graph_core.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "errors.hpp"

namespace walkpool {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InputError("DenseMatrix: " + std::to_string(data_.size()) + " entries for shape " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double DenseMatrix::row_sum(std::size_t r) const {
  double s = 0.0;
  for (double x : row(r)) s += x;
  return s;
}

DenseMatrix DenseMatrix::transposed() const {
  constexpr std::size_t kTile = 32;
  DenseMatrix t(cols_, rows_);
  for (std::size_t r0 = 0; r0 < rows_; r0 += kTile)
    for (std::size_t c0 = 0; c0 < cols_; c0 += kTile) {
      const std::size_t r1 = std::min(rows_, r0 + kTile), c1 = std::min(cols_, c0 + kTile);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) t(c, r) = (*this)(r, c);
    }
  return t;
}

namespace {

[[noreturn]] void shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  throw InputError(std::string(op) + ": incompatible shapes " + std::to_string(a.rows()) + "x" +
                   std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                   std::to_string(b.cols()));
}

// c = a * b with every c(i, j) accumulated over k in ascending order. Rows of
// b are visited in blocks so a block stays in cache across the rows of a.
// Zero coefficients of a are skipped, which leaves finite results
// bit-identical (adding a signed zero to a running sum that started at +0.0
// never changes it).
void accumulate_product(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  const std::size_t n = b.cols();
  constexpr std::size_t kBlock = 64;
  for (std::size_t k0 = 0; k0 < a.cols(); k0 += kBlock) {
    const std::size_t k1 = std::min(a.cols(), k0 + kBlock);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double* out = c.row(i).data();
      const double* arow = a.row(i).data();
      for (std::size_t k = k0; k < k1; ++k) {
        const double aik = arow[k];
        if (aik == 0.0) continue;
        const double* brow = b.row(k).data();
        for (std::size_t j = 0; j < n; ++j) out[j] += aik * brow[j];
      }
    }
  }
}

}  // namespace

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) shape_error("multiply", a, b);
  DenseMatrix c(a.rows(), b.cols());
  accumulate_product(a, b, c);
  return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) shape_error("multiply_tn", a, b);
  DenseMatrix c(a.cols(), b.cols());
  accumulate_product(a.transposed(), b, c);
  return c;
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) shape_error("multiply_nt", a, b);
  DenseMatrix c(a.rows(), b.rows());
  accumulate_product(a, b.transposed(), c);
  return c;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (NodeId v = 0; v < num_nodes(); ++v) best = std::max(best, degree(v));
  return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::optional<NodeId> Graph::internal_id(std::int64_t original) const {
  // Ingestion assigns internal ids in ascending order of original id.
  auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it != original_ids_.end() && *it == original) {
    return static_cast<NodeId>(it - original_ids_.begin());
  }
  // Fall back to a scan for id maps that are not sorted.
  if (!std::is_sorted(original_ids_.begin(), original_ids_.end())) {
    auto lin = std::find(original_ids_.begin(), original_ids_.end(), original);
    if (lin != original_ids_.end()) return static_cast<NodeId>(lin - original_ids_.begin());
  }
  return std::nullopt;
}

Graph Graph::with_original_ids(std::vector<std::int64_t> ids) const {
  if (ids.size() != num_nodes()) throw InputError("with_original_ids: id map size mismatch");
  Graph g = *this;
  g.original_ids_ = std::move(ids);
  return g;
}

Graph build_graph(std::size_t num_nodes, std::span<const NodePair> edges) {
  std::vector<NodePair> directed;
  directed.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw InputError("build_graph: node id out of range in edge (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") for " + std::to_string(num_nodes) + " nodes");
    }
    if (u == v) throw InputError("build_graph: self-loop on node " + std::to_string(u));
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.offsets_.assign(num_nodes + 1, 0);
  for (auto [u, v] : directed) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.reserve(directed.size());
  for (auto [u, v] : directed) g.targets_.push_back(v);
  g.original_ids_.resize(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) g.original_ids_[i] = static_cast<std::int64_t>(i);
  return g;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const NodeId> sources) {
  if (sources.empty()) throw InputError("bfs_distances: empty source set");
  std::vector<std::uint32_t> dist(g.num_nodes(), kUnreachable);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (s >= g.num_nodes()) throw InputError("bfs_distances: source out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

DenseMatrix adjacency_matrix(const Graph& g) {
  DenseMatrix a(g.num_nodes(), g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    for (NodeId v : g.neighbors(u)) a(u, v) = 1.0;
  return a;
}

DenseMatrix path_count_matrix(const Graph& g, unsigned tau) {
  return matrix_power(adjacency_matrix(g), tau);
}

DenseMatrix transition_matrix(const Graph& g) {
  const std::size_t n = g.num_nodes();
  DenseMatrix p(n, n);
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = g.neighbors(u);
    if (nb.empty()) continue;
    const double w = 1.0 / static_cast<double>(nb.size());
    for (NodeId v : nb) p(u, v) = w;
  }
  return p;
}

DenseMatrix transition_matrix(const Graph& g, const DenseMatrix& weights) {
  const std::size_t n = g.num_nodes();
  if (weights.rows() != n || weights.cols() != n) {
    throw InputError("transition_matrix: weight matrix must be " + std::to_string(n) + "x" +
                     std::to_string(n));
  }
  DenseMatrix p(n, n);
  for (NodeId u = 0; u < n; ++u) {
    double total = 0.0;
    for (NodeId v : g.neighbors(u)) {
      const double w = weights(u, v);
      if (!(w >= 0.0)) {
        throw InputError("transition_matrix: negative weight on (" + std::to_string(u) + ", " +
                         std::to_string(v) + ")");
      }
      total += w;
    }
    if (total <= 0.0) continue;
    for (NodeId v : g.neighbors(u)) p(u, v) = weights(u, v) / total;
  }
  return p;
}

double average_clustering(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    const std::size_t d = nb.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a) {
      // Count neighbors of nb[a] that are later in v's sorted neighbor list.
      const auto inner = g.neighbors(nb[a]);
      auto it = std::upper_bound(nb.begin(), nb.end(), nb[a]);
      auto jt = std::upper_bound(inner.begin(), inner.end(), nb[a]);
      while (it != nb.end() && jt != inner.end()) {
        if (*it < *jt) {
          ++it;
        } else if (*jt < *it) {
          ++jt;
        } else {
          ++links;
          ++it;
          ++jt;
        }
      }
    }
    total += 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  return total / static_cast<double>(n);
}

DenseMatrix matrix_power(const DenseMatrix& m, unsigned tau) {
  if (m.rows() != m.cols()) {
    throw InputError("matrix_power: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
  if (tau == 0) return DenseMatrix::identity(m.rows());
  DenseMatrix result = m;
  for (unsigned t = 1; t < tau; ++t) result = multiply(result, m);
  return result;
}

}  // namespace walkpool
