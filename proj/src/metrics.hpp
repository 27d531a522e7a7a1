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
#include <span>

namespace walkpool {

struct EvalResult {
  double auc = 0.0;
  double ap = 0.0;
  double precision_at_half = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

/// Probability that a random positive outscores a random negative, ties
/// counted as one half. Rank-sum formulation, O(n log n).
double auc(std::span<const double> pos, std::span<const double> neg);

/// Ranking average precision: mean over positives of the precision at that
/// positive's rank. Ties are broken negative-first so the value is a lower
/// bound under ties.
double average_precision(std::span<const double> pos, std::span<const double> neg);

/// TP / (TP + FP) at a fixed threshold of 0.5 (score > 0.5 is a predicted
/// link). Zero when nothing is predicted.
double precision_at_half(std::span<const double> pos, std::span<const double> neg);

EvalResult evaluate(std::span<const double> pos, std::span<const double> neg);

}  // namespace walkpool
