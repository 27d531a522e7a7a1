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
#include <vector>

#include "dataset_io.hpp"
#include "graph_core.hpp"

namespace walkpool {

/// k-hop neighborhood of a focal pair. Local ids 0 and 1 are the focal
/// endpoints (in the order given); the remaining nodes follow in order of
/// (hop, global id). `local_graph` is the induced subgraph with the focal
/// edge removed, i.e. the G- variant.
struct EnclosingSubgraph {
  Graph local_graph;
  std::vector<NodeId> node_map;        // local -> global
  std::vector<std::uint32_t> hop_of;   // BFS hop at which the node was sampled
  unsigned hops = 0;
  bool positive = false;

  std::size_t num_nodes() const { return node_map.size(); }
};

/// The focal edge forced present (plus) and absent (minus).
struct SubgraphVariant {
  EnclosingSubgraph base;
  Graph adjacency_plus;
  Graph adjacency_minus;
};

/// Joint BFS from both endpoints over `g` (the focal edge counts for
/// reachability when present). A hop that discovers more than `max_per_hop`
/// new nodes keeps a uniform sample of that many, drawn from a stream derived
/// from (seed, unordered focal pair); discarded nodes are not revisited.
/// max_per_hop = 0 disables the cap.
EnclosingSubgraph extract_enclosing(const Graph& g, NodePair focal, unsigned hops, std::size_t max_per_hop,
                                    std::uint64_t seed, bool positive = false);

SubgraphVariant make_variants(EnclosingSubgraph sub);

/// Largest distance bucket before the unreachable bucket: min(hops + 1, 5).
unsigned distance_label_cap(unsigned hops);

/// Bucket index d0 * (cap + 2) + d1 for clipped distances to the two focal
/// endpoints on G-; unreachable maps to cap + 1. The endpoints themselves are
/// fixed to (0, 1) and (1, 0).
std::vector<std::size_t> distance_label_indices(const EnclosingSubgraph& sub);

/// One-hot rows of distance_label_indices modulo `dim`. dim must be >= 4.
NodeFeatures distance_labels(const EnclosingSubgraph& sub, std::size_t dim);

}  // namespace walkpool
