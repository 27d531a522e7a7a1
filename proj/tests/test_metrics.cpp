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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "testing.hpp"

using namespace walkpool;
using namespace walkpool::testing;

namespace {

std::vector<double> random_scores(Rng& rng, std::size_t n, int levels) {
  std::vector<double> out(n);
  for (auto& x : out) x = static_cast<double>(rng.below(levels)) / levels;
  return out;
}

}  // namespace

TEST_CASE("auc examples") {
  CHECK(auc(std::vector{0.9, 0.8}, std::vector{0.7, 0.1}) == 1.0);
  CHECK(auc(std::vector{0.5}, std::vector{0.5}) == 0.5);
  CHECK(auc(std::vector{0.6, 0.2}, std::vector{0.4, 0.3}) == 0.5);
  CHECK_THROWS_AS(auc(std::vector<double>{}, std::vector{0.1}), InputError);
}

TEST_CASE("average precision examples") {
  CHECK(average_precision(std::vector{0.9}, std::vector{0.1}) == 1.0);
  CHECK(average_precision(std::vector{0.1}, std::vector{0.9}) == 0.5);
  CHECK(average_precision(std::vector{0.8, 0.4}, std::vector{0.6}) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("precision at one half") {
  CHECK(precision_at_half(std::vector{0.9}, std::vector{0.1}) == 1.0);
  CHECK(precision_at_half(std::vector{0.4}, std::vector{0.6}) == 0.0);
  CHECK(precision_at_half(std::vector{0.9, 0.6}, std::vector{0.7, 0.2}) == doctest::Approx(2.0 / 3.0));
  CHECK(precision_at_half(std::vector{0.2}, std::vector{0.1}) == 0.0);
}

TEST_CASE("ranking metrics match brute-force oracles") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto pos = random_scores(rng, 1 + rng.below(30), 1 + static_cast<int>(rng.below(12)));
    auto neg = random_scores(rng, 1 + rng.below(30), 1 + static_cast<int>(rng.below(12)));
    CHECK(auc(pos, neg) == brute_auc(pos, neg));
    CHECK(std::abs(average_precision(pos, neg) - brute_ap(pos, neg)) < 1e-12);
    CHECK(auc(pos, neg) + auc(neg, pos) == 1.0);
  }
}

TEST_CASE("auc is invariant under strictly monotone transforms") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto pos = random_scores(rng, 1 + rng.below(20), 8);
    auto neg = random_scores(rng, 1 + rng.below(20), 8);
    auto tp = pos, tn = neg;
    for (auto& x : tp) x = std::exp(3.0 * x) - 7.0;
    for (auto& x : tn) x = std::exp(3.0 * x) - 7.0;
    CHECK(auc(pos, neg) == auc(tp, tn));
  }
}

TEST_CASE("average precision is one exactly under perfect separation") {
  CHECK(average_precision(std::vector{0.9, 0.8}, std::vector{0.3, 0.1}) == 1.0);
  CHECK(average_precision(std::vector{0.9, 0.5}, std::vector{0.5, 0.1}) < 1.0);
}

TEST_CASE("evaluate bundles the metrics") {
  auto r = evaluate(std::vector{0.9, 0.6}, std::vector{0.7, 0.2});
  CHECK(r.n_pos == 2);
  CHECK(r.n_neg == 2);
  CHECK(r.auc == 0.75);
  CHECK(r.precision_at_half == doctest::Approx(2.0 / 3.0));
}
