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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace walkpool {

using NodeId = std::uint32_t;
using NodePair = std::pair<NodeId, NodeId>;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Row-major dense matrix of doubles. Used for subgraph-sized transition
/// matrices and their powers, and as the value/gradient storage of tensors.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  void fill(double v);
  double row_sum(std::size_t r) const;
  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Products with a fixed summation order (k ascending, starting from 0.0) so
// that results do not depend on batch shape, and swapping the first two
// indices of the contracted dimension is bit-exact.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);

/// Immutable undirected simple graph in CSR form.
///
/// Neighbor lists are sorted and deduplicated, there are no self-loops, and
/// adjacency is symmetric. `original_ids` maps internal ids back to the ids
/// found at ingestion (identity when the graph was built in memory).
class Graph {
 public:
  Graph() = default;

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;
  bool has_edge(NodeId u, NodeId v) const;

  // Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<NodePair> edges() const;

  const std::vector<std::int64_t>& original_ids() const noexcept { return original_ids_; }
  std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
  // Internal id for an ingestion id, if present.
  std::optional<NodeId> internal_id(std::int64_t original) const;

  // Same topology, different reporting ids. Size must match num_nodes().
  Graph with_original_ids(std::vector<std::int64_t> ids) const;

  friend Graph build_graph(std::size_t num_nodes, std::span<const NodePair> edges);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::int64_t> original_ids_;
};

/// Builds a symmetric deduplicated graph. Throws InputError on out-of-range
/// ids or self-loops.
Graph build_graph(std::size_t num_nodes, std::span<const NodePair> edges);

/// Multi-source BFS hop distances; unreachable nodes get kUnreachable.
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const NodeId> sources);

/// Number of length-tau walks between every pair (A^tau). tau = 0 gives I.
DenseMatrix path_count_matrix(const Graph& g, unsigned tau);

/// D^-1 A, optionally with per-ordered-pair weights in place of A's ones.
/// Rows of isolated nodes are all zero.
DenseMatrix transition_matrix(const Graph& g);
DenseMatrix transition_matrix(const Graph& g, const DenseMatrix& weights);

double average_clustering(const Graph& g);

/// m^tau by repeated multiplication; tau = 0 gives I.
DenseMatrix matrix_power(const DenseMatrix& m, unsigned tau);

/// Dense 0/1 adjacency.
DenseMatrix adjacency_matrix(const Graph& g);

}  // namespace walkpool
