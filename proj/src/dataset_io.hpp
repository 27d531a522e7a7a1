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
#include <filesystem>
#include <vector>

#include "graph_core.hpp"

namespace walkpool {

/// Train/validation/test partition of a graph's edges plus equally sized
/// sets of sampled non-edges. All pairs use internal ids and are stored as
/// (u, v) with u < v. `observed_graph` holds the training positives only, over
/// the full node set of the source graph.
struct EdgeSplit {
  Graph observed_graph;
  std::vector<NodePair> train_pos;
  std::vector<NodePair> val_pos;
  std::vector<NodePair> test_pos;
  std::vector<NodePair> train_neg;
  std::vector<NodePair> val_neg;
  std::vector<NodePair> test_neg;
  std::uint64_t seed = 0;
  double test_ratio = 0.0;
  double val_ratio = 0.0;

  bool operator==(const EdgeSplit& other) const;
};

/// Per-node feature rows aligned to internal node ids.
struct NodeFeatures {
  DenseMatrix rows;

  std::size_t num_nodes() const { return rows.rows(); }
  std::size_t dim() const { return rows.cols(); }
};

/// Reads "u v" lines. '#' starts a comment, blank lines are skipped. Node ids
/// are remapped to 0..n-1 in ascending order of their file id.
Graph load_edge_list(const std::filesystem::path& path);

/// Shuffles the edge set with Rng(seed), takes floor(test_ratio*|E|) test
/// edges, then floor(val_ratio*remaining) validation edges; the rest train.
/// Negatives are drawn uniformly from non-edges of `g` (test, val, train order).
EdgeSplit split_edges(const Graph& g, double test_ratio, double val_ratio, std::uint64_t seed);

/// Throws InputError if positive tiers overlap, or if any negative is a true
/// edge, repeats, or appears in two tiers.
void validate_split(const EdgeSplit& split);

/// "<id> <f1> ... <fD>" rows, ids in the graph's original id space.
NodeFeatures load_embeddings(const std::filesystem::path& path, const Graph& g);

/// Directory with train_pos.txt, train_neg.txt, val_pos.txt, val_neg.txt,
/// test_pos.txt, test_neg.txt (original ids) and meta.txt (key=value).
void save_split(const EdgeSplit& split, const std::filesystem::path& dir);
EdgeSplit load_split(const std::filesystem::path& dir);

}  // namespace walkpool
