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
#include <string_view>
#include <vector>

#include "graph_core.hpp"
#include "nn.hpp"
#include "subgraph.hpp"
#include "tensor.hpp"

namespace walkpool {

/// Which walk-profile groups enter the feature vector. Excluded groups are
/// dropped, not zero-filled, so the classifier input shrinks with them.
struct FeatureMask {
  bool omega = true;
  bool node = true;
  bool link = true;
  bool graph = true;

  /// Comma-separated subset of {omega, node, link, graph} to exclude.
  static FeatureMask excluding(std::string_view list);
  /// Inverse of excluding(): "" when nothing is excluded.
  std::string excluded_list() const;
  bool any() const { return omega || node || link || graph; }
};

/// heads * (omega + (2 node + 2 link + 1 graph) * (tau_c - 1)); 62 for
/// 2 heads, tau_c = 7 and the full mask.
std::size_t walk_profile_length(std::size_t heads, unsigned tau_c, const FeatureMask& mask = {});

/// Query and key MLPs of one attention head.
struct AttentionHead {
  ad::Mlp query;
  ad::Mlp key;
};

/// Scores for every ordered node pair: Q(z_x) . K(z_y) / sqrt(F''), where F''
/// is the MLP output width. Only adjacent pairs are consumed downstream.
ad::Tensor edge_scores(const ad::Tensor& z, const AttentionHead& head);

/// Row softmax of the scores over each node's neighbors in `adjacency`;
/// zero for non-neighbors and for isolated nodes.
ad::Tensor attention_transition(const Graph& adjacency, const ad::Tensor& scores);

/// 1x3 [P00 + P11, P01 + P10, trace P].
ad::Tensor walk_readout(const ad::Tensor& power);

/// Readouts of P^tau for tau = 2..tau_c, each 1x3 (node, link, graph).
std::vector<ad::Tensor> walk_profile_features(const ad::Tensor& p, unsigned tau_c);

/// One feature row (1 x walk_profile_length) for a subgraph. Layout is head
/// major; within a head: omega, then per tau: node+, node-, link+, link-,
/// delta graph. The omega entry is the focal score averaged over both
/// orientations so the row does not depend on which endpoint is local 0.
ad::Tensor wp_features(const SubgraphVariant& variant, const ad::Tensor& z, std::span<const AttentionHead> heads,
                       unsigned tau_c, const FeatureMask& mask = {});

/// sigmoid(MLP(rows)); one probability per row.
ad::Tensor classify(const ad::Tensor& rows, const ad::Mlp& classifier);

}  // namespace walkpool
