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

#include "subgraph.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"

namespace walkpool {

EnclosingSubgraph extract_enclosing(const Graph& g, NodePair focal, unsigned hops, std::size_t max_per_hop,
                                    std::uint64_t seed, bool positive) {
  const auto [i, j] = focal;
  if (i >= g.num_nodes() || j >= g.num_nodes()) {
    throw InputError("extract_enclosing: focal endpoint out of range");
  }
  if (i == j) throw InputError("extract_enclosing: focal endpoints must differ");
  if (hops < 1) throw InputError("extract_enclosing: hops must be at least 1");

  Rng rng(Rng::derive(seed, std::min(i, j), std::max(i, j)));

  EnclosingSubgraph sub;
  sub.hops = hops;
  sub.positive = positive;
  sub.node_map = {i, j};
  sub.hop_of = {0, 0};

  std::unordered_set<NodeId> visited{i, j};
  std::vector<NodeId> frontier{i, j};
  for (unsigned h = 1; h <= hops && !frontier.empty(); ++h) {
    std::vector<NodeId> next;
    for (NodeId u : frontier)
      for (NodeId v : g.neighbors(u))
        if (!visited.count(v)) next.push_back(v);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (NodeId v : next) visited.insert(v);
    if (max_per_hop > 0 && next.size() > max_per_hop) {
      rng.shuffle(std::span<NodeId>(next));
      next.resize(max_per_hop);
      std::sort(next.begin(), next.end());
    }
    for (NodeId v : next) {
      sub.node_map.push_back(v);
      sub.hop_of.push_back(h);
    }
    frontier = std::move(next);
  }

  std::unordered_map<NodeId, NodeId> local;
  local.reserve(sub.node_map.size() * 2);
  for (NodeId l = 0; l < sub.node_map.size(); ++l) local.emplace(sub.node_map[l], l);

  std::vector<NodePair> edges;
  for (NodeId a = 0; a < sub.node_map.size(); ++a) {
    for (NodeId v : g.neighbors(sub.node_map[a])) {
      auto it = local.find(v);
      if (it == local.end()) continue;
      const NodeId b = it->second;
      if (a >= b) continue;
      if (a == 0 && b == 1) continue;  // focal edge lives only in the plus variant
      edges.emplace_back(a, b);
    }
  }
  sub.local_graph = build_graph(sub.node_map.size(), edges);
  return sub;
}

SubgraphVariant make_variants(EnclosingSubgraph sub) {
  SubgraphVariant out;
  auto edges = sub.local_graph.edges();
  std::erase(edges, NodePair{0, 1});
  out.adjacency_minus = build_graph(sub.num_nodes(), edges);
  edges.emplace_back(0, 1);
  out.adjacency_plus = build_graph(sub.num_nodes(), edges);
  out.base = std::move(sub);
  return out;
}

unsigned distance_label_cap(unsigned hops) { return std::min(hops + 1, 5u); }

std::vector<std::size_t> distance_label_indices(const EnclosingSubgraph& sub) {
  const std::size_t n = sub.num_nodes();
  const unsigned cap = distance_label_cap(sub.hops);
  const NodeId src0[] = {0};
  const NodeId src1[] = {1};
  const auto d0 = bfs_distances(sub.local_graph, src0);
  const auto d1 = bfs_distances(sub.local_graph, src1);
  auto clip = [cap](std::uint32_t d) -> std::size_t {
    if (d == kUnreachable) return cap + 1;
    return std::min<std::size_t>(d, cap);
  };
  std::vector<std::size_t> idx(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t a = clip(d0[v]);
    std::size_t b = clip(d1[v]);
    if (v == 0) b = 1;
    if (v == 1) a = 1;
    idx[v] = a * (cap + 2) + b;
  }
  return idx;
}

NodeFeatures distance_labels(const EnclosingSubgraph& sub, std::size_t dim) {
  if (dim < 4) throw InputError("distance_labels: dim must be at least 4");
  const auto idx = distance_label_indices(sub);
  NodeFeatures f{DenseMatrix(sub.num_nodes(), dim)};
  for (std::size_t v = 0; v < idx.size(); ++v) f.rows(v, idx[v] % dim) = 1.0;
  return f;
}

}  // namespace walkpool
