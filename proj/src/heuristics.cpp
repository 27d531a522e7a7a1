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

#include "heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "errors.hpp"
#include "log.hpp"

namespace walkpool {

namespace {

void check_pair(const Graph& g, NodeId i, NodeId j) {
  if (i >= g.num_nodes() || j >= g.num_nodes()) throw InputError("heuristic: node id out of range");
  if (i == j) throw InputError("heuristic: pair endpoints must differ");
}

template <typename Fn>
void for_each_common(const Graph& g, NodeId i, NodeId j, Fn&& fn) {
  const auto a = g.neighbors(i);
  const auto b = g.neighbors(j);
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      fn(*x);
      ++x;
      ++y;
    }
  }
}

void warn_katz_divergence(const Graph& g, double beta) {
  if (beta * static_cast<double>(g.max_degree()) >= 1.0) {
    log::warn("katz: beta * max_degree = " + std::to_string(beta * static_cast<double>(g.max_degree())) +
              " >= 1; the series may diverge");
  }
}

double katz_unchecked(const Graph& g, NodeId i, NodeId j, double beta, unsigned l_max) {
  // Walk from the smaller id so that the score is exactly symmetric.
  if (i > j) std::swap(i, j);
  const std::size_t n = g.num_nodes();
  std::vector<double> walks(n, 0.0);
  std::vector<double> next(n, 0.0);
  walks[i] = 1.0;
  double score = 0.0;
  double decay = 1.0;
  for (unsigned l = 1; l <= l_max; ++l) {
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId u = 0; u < n; ++u) {
      if (walks[u] == 0.0) continue;
      for (NodeId v : g.neighbors(u)) next[v] += walks[u];
    }
    walks.swap(next);
    decay *= beta;
    score += decay * walks[j];
  }
  return score;
}

}  // namespace

HeuristicMethod parse_heuristic(std::string_view name) {
  if (name == "cn") return HeuristicMethod::common_neighbors;
  if (name == "aa") return HeuristicMethod::adamic_adar;
  if (name == "katz") return HeuristicMethod::katz;
  if (name == "pr") return HeuristicMethod::rooted_pagerank;
  throw InputError("unknown heuristic '" + std::string(name) + "' (expected cn, aa, katz or pr)");
}

std::string_view heuristic_name(HeuristicMethod m) {
  switch (m) {
    case HeuristicMethod::common_neighbors: return "cn";
    case HeuristicMethod::adamic_adar: return "aa";
    case HeuristicMethod::katz: return "katz";
    case HeuristicMethod::rooted_pagerank: return "pr";
  }
  return "?";
}

double common_neighbors(const Graph& g, NodeId i, NodeId j) {
  check_pair(g, i, j);
  std::size_t count = 0;
  for_each_common(g, i, j, [&](NodeId) { ++count; });
  return static_cast<double>(count);
}

double adamic_adar(const Graph& g, NodeId i, NodeId j) {
  check_pair(g, i, j);
  double score = 0.0;
  // A shared neighbor has degree >= 2, so the logarithm is positive.
  for_each_common(g, i, j, [&](NodeId z) { score += 1.0 / std::log(static_cast<double>(g.degree(z))); });
  return score;
}

double katz(const Graph& g, NodeId i, NodeId j, double beta, unsigned l_max) {
  check_pair(g, i, j);
  if (l_max < 1) throw InputError("katz: l_max must be at least 1");
  warn_katz_divergence(g, beta);
  return katz_unchecked(g, i, j, beta, l_max);
}

std::vector<double> rooted_pagerank_vector(const Graph& g, NodeId root, double alpha, unsigned iters,
                                           double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("rooted_pagerank: alpha must lie in (0, 1)");
  if (root >= g.num_nodes()) throw InputError("rooted_pagerank: root out of range");
  const std::size_t n = g.num_nodes();
  std::vector<double> pi(n, 0.0);
  std::vector<double> next(n, 0.0);
  pi[root] = 1.0;
  for (unsigned it = 0; it < iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId u = 0; u < n; ++u) {
      if (pi[u] == 0.0) continue;
      const auto nb = g.neighbors(u);
      if (nb.empty()) continue;
      const double share = alpha * pi[u] / static_cast<double>(nb.size());
      for (NodeId v : nb) next[v] += share;
    }
    next[root] += 1.0 - alpha;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - pi[v]);
    pi.swap(next);
    if (change < tol) return pi;
  }
  throw RuntimeFailure("rooted_pagerank: no convergence to tol " + std::to_string(tol) + " within " +
                       std::to_string(iters) + " iterations");
}

double rooted_pagerank(const Graph& g, NodeId i, NodeId j, double alpha, unsigned iters, double tol) {
  check_pair(g, i, j);
  const auto from_i = rooted_pagerank_vector(g, i, alpha, iters, tol);
  const auto from_j = rooted_pagerank_vector(g, j, alpha, iters, tol);
  return from_i[j] + from_j[i];
}

std::vector<HeuristicScore> score_pairs(const Graph& g, HeuristicMethod method, std::span<const NodePair> pairs,
                                        const HeuristicParams& params) {
  std::vector<HeuristicScore> out;
  out.reserve(pairs.size());
  if (method == HeuristicMethod::katz) {
    if (params.katz_lmax < 1) throw InputError("katz: l_max must be at least 1");
    warn_katz_divergence(g, params.katz_beta);
  }
  std::unordered_map<NodeId, std::vector<double>> pr_cache;
  auto pr_from = [&](NodeId root) -> const std::vector<double>& {
    auto it = pr_cache.find(root);
    if (it == pr_cache.end()) {
      it = pr_cache
               .emplace(root, rooted_pagerank_vector(g, root, params.pr_alpha, params.pr_iters, params.pr_tol))
               .first;
    }
    return it->second;
  };
  for (auto [i, j] : pairs) {
    double value = 0.0;
    switch (method) {
      case HeuristicMethod::common_neighbors: value = common_neighbors(g, i, j); break;
      case HeuristicMethod::adamic_adar: value = adamic_adar(g, i, j); break;
      case HeuristicMethod::katz:
        check_pair(g, i, j);
        value = katz_unchecked(g, i, j, params.katz_beta, params.katz_lmax);
        break;
      case HeuristicMethod::rooted_pagerank:
        check_pair(g, i, j);
        value = pr_from(i)[j] + pr_from(j)[i];
        break;
    }
    out.push_back({{i, j}, value});
  }
  return out;
}

}  // namespace walkpool
