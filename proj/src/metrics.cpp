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

#include "metrics.hpp"

#include <algorithm>
#include <vector>

#include "errors.hpp"

namespace walkpool {

namespace {

struct Scored {
  double score;
  bool positive;
};

void require_nonempty(const char* op, std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw InputError(std::string(op) + ": both positive and negative scores are required");
  }
}

std::vector<Scored> merge(std::span<const double> pos, std::span<const double> neg) {
  std::vector<Scored> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  return all;
}

}  // namespace

double auc(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty("auc", pos, neg);
  auto all = merge(pos, neg);
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Sum of midranks (1-based) of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (all[k].positive) rank_sum += midrank;
    i = j;
  }
  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());
  // Twice the Mann-Whitney statistic is an integer, so this is one correctly
  // rounded division; auc(p, n) + auc(n, p) then rounds to exactly 1.
  return (2.0 * rank_sum - np * (np + 1.0)) / (2.0 * np * nn);
}

double average_precision(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty("average_precision", pos, neg);
  auto all = merge(pos, neg);
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return !a.positive && b.positive;
  });
  double total = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (!all[k].positive) continue;
    ++hits;
    total += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return total / static_cast<double>(pos.size());
}

double precision_at_half(std::span<const double> pos, std::span<const double> neg) {
  const auto tp = std::count_if(pos.begin(), pos.end(), [](double s) { return s > 0.5; });
  const auto fp = std::count_if(neg.begin(), neg.end(), [](double s) { return s > 0.5; });
  if (tp + fp == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

EvalResult evaluate(std::span<const double> pos, std::span<const double> neg) {
  EvalResult r;
  r.auc = auc(pos, neg);
  r.ap = average_precision(pos, neg);
  r.precision_at_half = precision_at_half(pos, neg);
  r.n_pos = pos.size();
  r.n_neg = neg.size();
  return r;
}

}  // namespace walkpool
