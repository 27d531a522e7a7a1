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

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "heuristics.hpp"
#include "log.hpp"
#include "testing.hpp"

using namespace walkpool;
using namespace walkpool::testing;

namespace {

struct QuietLog {
  log::Level saved = log::level();
  QuietLog() { log::set_level(log::Level::off); }
  ~QuietLog() { log::set_level(saved); }
};

}  // namespace

TEST_CASE("common neighbors") {
  CHECK(common_neighbors(complete_graph(3), 0, 1) == 1.0);
  CHECK(common_neighbors(path_graph(3), 0, 2) == 1.0);
  CHECK(common_neighbors(make_graph(4, {{0, 1}, {2, 3}}), 0, 2) == 0.0);
  CHECK_THROWS_AS(common_neighbors(path_graph(3), 1, 1), InputError);
}

TEST_CASE("adamic adar") {
  CHECK(adamic_adar(path_graph(3), 0, 2) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(adamic_adar(make_graph(4, {{0, 1}, {2, 3}}), 0, 2) == 0.0);
  CHECK(adamic_adar(complete_graph(4), 0, 1) == doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("adamic adar is bounded by scaled common neighbors") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_graph(20, 0.3, rng);
    const double ln_max = std::log(static_cast<double>(std::max<std::size_t>(g.max_degree(), 2)));
    for (NodeId i = 0; i < 20; ++i) {
      for (NodeId j = i + 1; j < 20; ++j) {
        const double cn = common_neighbors(g, i, j);
        const double aa = adamic_adar(g, i, j);
        CHECK(aa >= cn / ln_max - 1e-12);
        CHECK(aa <= cn / std::log(2.0) + 1e-12);
      }
    }
  }
}

TEST_CASE("katz examples") {
  auto tri = complete_graph(3);
  CHECK(katz(tri, 0, 1, 0.1, 3) == doctest::Approx(0.113).epsilon(1e-14));
  CHECK(katz(tri, 0, 1, 0.0, 5) == 0.0);
  CHECK_THROWS_AS(katz(tri, 0, 1, 0.1, 0), InputError);
}

TEST_CASE("katz matches truncated walk enumeration") {
  QuietLog quiet;
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(8, rng.uniform(0.2, 0.7), rng);
    const double beta = rng.uniform(0.01, 0.2);
    std::vector<DenseMatrix> walks;
    for (unsigned l = 1; l <= 4; ++l) walks.push_back(enumerate_walks(g, l));
    for (NodeId i = 0; i < 8; ++i) {
      for (NodeId j = 0; j < 8; ++j) {
        if (i == j) continue;
        double expect = 0.0;
        for (unsigned l = 1; l <= 4; ++l) expect += std::pow(beta, l) * walks[l - 1](i, j);
        CHECK(std::abs(katz(g, i, j, beta, 4) - expect) <= 1e-10);
      }
    }
  }
}

TEST_CASE("katz grows with the truncation length") {
  QuietLog quiet;
  Rng rng(8);
  auto g = random_graph(12, 0.3, rng);
  double prev = 0.0;
  for (unsigned l = 1; l <= 8; ++l) {
    const double k = katz(g, 0, 5, 0.05, l);
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("rooted pagerank") {
  auto tri = complete_graph(3);
  const double a = rooted_pagerank(tri, 0, 1, 0.85, 1000, 1e-12);
  CHECK(rooted_pagerank(tri, 1, 2, 0.85, 1000, 1e-12) == doctest::Approx(a).epsilon(1e-12));
  CHECK(rooted_pagerank(tri, 0, 2, 0.85, 1000, 1e-12) == doctest::Approx(a).epsilon(1e-12));

  auto two = make_graph(4, {{0, 1}, {2, 3}});
  CHECK(rooted_pagerank(two, 0, 2, 0.85, 1000, 1e-10) == 0.0);

  CHECK_THROWS_AS(rooted_pagerank(tri, 0, 1, 1.0, 100, 1e-8), InputError);
  CHECK_THROWS_AS(rooted_pagerank(tri, 0, 1, 0.85, 2, 1e-15), RuntimeFailure);
}

TEST_CASE("rooted pagerank matches a dense linear solve") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(6, rng.uniform(0.2, 0.8), rng);
    const double alpha = rng.uniform(0.5, 0.95);
    for (NodeId root = 0; root < 6; ++root) {
      auto iter = rooted_pagerank_vector(g, root, alpha, 10000, 1e-14);
      auto exact = pagerank_by_solve(g, root, alpha);
      for (NodeId v = 0; v < 6; ++v) CHECK(std::abs(iter[v] - exact[v]) <= 1e-8);
    }
  }
}

TEST_CASE("heuristic scores are symmetric and relabel invariant") {
  QuietLog quiet;
  Rng rng(5);
  const HeuristicMethod methods[] = {HeuristicMethod::common_neighbors, HeuristicMethod::adamic_adar,
                                     HeuristicMethod::katz, HeuristicMethod::rooted_pagerank};
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(15, 0.25, rng);
    auto perm = random_permutation(15, rng);
    auto h = permuted(g, perm);
    std::vector<NodePair> pairs, flipped, relabeled;
    for (int k = 0; k < 10; ++k) {
      auto i = static_cast<NodeId>(rng.below(15));
      auto j = static_cast<NodeId>(rng.below(15));
      if (i == j) continue;
      pairs.emplace_back(i, j);
      flipped.emplace_back(j, i);
      relabeled.emplace_back(perm[i], perm[j]);
    }
    for (auto m : methods) {
      auto a = score_pairs(g, m, pairs);
      auto b = score_pairs(g, m, flipped);
      for (std::size_t k = 0; k < pairs.size(); ++k) CHECK(a[k].value == b[k].value);
      if (m == HeuristicMethod::common_neighbors || m == HeuristicMethod::adamic_adar) {
        auto c = score_pairs(h, m, relabeled);
        for (std::size_t k = 0; k < pairs.size(); ++k) CHECK(a[k].value == doctest::Approx(c[k].value).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("score_pairs passes through to the single-pair scores") {
  auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}, {3, 4}});
  const std::vector<NodePair> pairs = {{0, 2}, {4, 1}, {2, 4}};
  HeuristicParams p;
  auto cn = score_pairs(g, parse_heuristic("cn"), pairs, p);
  auto aa = score_pairs(g, parse_heuristic("aa"), pairs, p);
  auto kz = score_pairs(g, parse_heuristic("katz"), pairs, p);
  auto pr = score_pairs(g, parse_heuristic("pr"), pairs, p);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [i, j] = pairs[k];
    CHECK(cn[k].pair == pairs[k]);
    CHECK(cn[k].value == common_neighbors(g, i, j));
    CHECK(aa[k].value == adamic_adar(g, i, j));
    CHECK(kz[k].value == katz(g, i, j, p.katz_beta, p.katz_lmax));
    CHECK(pr[k].value == rooted_pagerank(g, i, j, p.pr_alpha, p.pr_iters, p.pr_tol));
  }
  CHECK_THROWS_AS(parse_heuristic("adamic"), InputError);
  CHECK(heuristic_name(parse_heuristic("katz")) == "katz");
}
