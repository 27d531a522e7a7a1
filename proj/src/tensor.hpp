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
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graph_core.hpp"

namespace walkpool::ad {

// Receives the gradient of the op's output and accumulates into the gradient
// buffers of its inputs. Entries are null for inputs that need no gradient.
using BackwardFn = std::function<void(const DenseMatrix& grad_out, std::span<DenseMatrix* const> grad_in)>;

struct Node {
  DenseMatrix value;
  DenseMatrix grad;  // empty until something flows in
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  BackwardFn backward;
};

/// Handle to a node of the dynamically recorded computation graph. Copies
/// share the node. Leaves are created with constant() or parameter();
/// every op below records its inputs when any of them requires a gradient.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(DenseMatrix value);
  static Tensor parameter(DenseMatrix value);
  static Tensor scalar(double v) { return constant(DenseMatrix(1, 1, v)); }

  bool defined() const { return node_ != nullptr; }
  const DenseMatrix& value() const { return node_->value; }
  // Mutable access for optimizers and finite-difference probes on leaves.
  DenseMatrix& mutable_value() { return node_->value; }
  const DenseMatrix& grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }
  std::size_t rows() const { return node_->value.rows(); }
  std::size_t cols() const { return node_->value.cols(); }
  double item() const;

  // Resets the gradient to zeros of the value's shape.
  void zero_grad();

  const std::shared_ptr<Node>& node() const { return node_; }

  static Tensor make(DenseMatrix value, std::vector<Tensor> inputs, BackwardFn backward);

 private:
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}
  std::shared_ptr<Node> node_;
};

/// While alive, ops on this thread record no dependencies (inference).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Runs reverse accumulation from `root`, seeding it with `seed` (ones of the
/// root's shape when omitted). Each recorded node is visited exactly once, in
/// reverse topological order. Leaf gradients accumulate across calls.
void backward(const Tensor& root);
void backward(const Tensor& root, const DenseMatrix& seed);

// ---- differentiable ops ----------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // a * b^T

/// a * b for a square b that is zero off the adjacency of `pattern`. Only
/// pattern entries of b are read, and b's gradient is kept on the pattern.
/// `pattern` must outlive the recorded graph.
Tensor matmul_pattern(const Tensor& a, const Tensor& b, const Graph& pattern);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor add_bias(const Tensor& a, const Tensor& bias);  // bias is 1 x cols, added to every row
Tensor scale(const Tensor& a, double s);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

/// Row-wise softmax over entries where mask != 0, after subtracting the row
/// maximum over those entries. Masked entries are 0; rows with no allowed
/// entry are all zero.
Tensor masked_softmax(const Tensor& a, const DenseMatrix& mask);

Tensor trace(const Tensor& a);                             // 1 x 1
Tensor element(const Tensor& a, std::size_t r, std::size_t c);  // 1 x 1
Tensor sum(const Tensor& a);                               // 1 x 1
Tensor concat_cols(std::span<const Tensor> parts);         // equal row counts
Tensor concat_rows(std::span<const Tensor> parts);         // equal column counts
Tensor select_rows(const Tensor& a, std::span<const std::size_t> rows);

/// Mean of squared differences over all entries.
Tensor mse_loss(const Tensor& pred, const DenseMatrix& target);

// ---- finite-difference checking ---------------------------------------------

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "<param>[r,c]" of the worst coordinate
};

/// Compares reverse-mode gradients of `loss_fn()` (a 1x1 tensor rebuilt on
/// every call) against central differences with the given step, on up to
/// `max_coords_per_param` coordinates of each parameter chosen with `seed`.
/// Relative error uses max(|analytic|, |numeric|, 1e-6) as denominator.
GradCheckReport grad_check(const std::function<Tensor()>& loss_fn, std::span<Tensor> params,
                           std::span<const std::string> names, double step = 1e-5,
                           std::size_t max_coords_per_param = 0, std::uint64_t seed = 0);

}  // namespace walkpool::ad
