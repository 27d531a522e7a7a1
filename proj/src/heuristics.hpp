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
#include <string_view>
#include <vector>

#include "graph_core.hpp"

namespace walkpool {

enum class HeuristicMethod { common_neighbors, adamic_adar, katz, rooted_pagerank };

/// Parses "cn", "aa", "katz" or "pr". Throws InputError otherwise.
HeuristicMethod parse_heuristic(std::string_view name);
std::string_view heuristic_name(HeuristicMethod m);

struct HeuristicParams {
  double katz_beta = 0.001;  // decay per walk step
  unsigned katz_lmax = 32;   // truncation of the walk-length series
  double pr_alpha = 0.85;    // continuation probability; restart with 1 - alpha
  unsigned pr_iters = 1000;
  double pr_tol = 1e-8;      // L1 change between iterates
};

struct HeuristicScore {
  NodePair pair;
  double value = 0.0;
};

double common_neighbors(const Graph& g, NodeId i, NodeId j);

// Sum of 1 / ln(degree) over shared neighbors.
double adamic_adar(const Graph& g, NodeId i, NodeId j);

// sum_{l=1..l_max} beta^l [A^l]_ij. Warns when beta * max_degree >= 1.
double katz(const Graph& g, NodeId i, NodeId j, double beta, unsigned l_max);

// Stationary distribution of the walk that restarts at `root` with
// probability 1 - alpha, by power iteration from e_root.
std::vector<double> rooted_pagerank_vector(const Graph& g, NodeId root, double alpha, unsigned iters,
                                           double tol);

// pi_i(j) + pi_j(i).
double rooted_pagerank(const Graph& g, NodeId i, NodeId j, double alpha, unsigned iters, double tol);

/// Scores each pair; output order follows input order.
std::vector<HeuristicScore> score_pairs(const Graph& g, HeuristicMethod method, std::span<const NodePair> pairs,
                                        const HeuristicParams& params = {});

}  // namespace walkpool
