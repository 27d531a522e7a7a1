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

#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"

namespace walkpool::ad {

namespace {

std::string shape_of(const DenseMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw InputError(std::string(op) + ": incompatible shapes " + shape_of(a.value()) + " and " +
                   shape_of(b.value()));
}

void accumulate(DenseMatrix& into, const DenseMatrix& delta) {
  auto& d = into.data();
  const auto& s = delta.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += s[k];
}

thread_local bool t_recording = true;

}  // namespace

NoGradGuard::NoGradGuard() : previous_(t_recording) { t_recording = false; }
NoGradGuard::~NoGradGuard() { t_recording = previous_; }

Tensor Tensor::constant(DenseMatrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return Tensor(std::move(node));
}

Tensor Tensor::parameter(DenseMatrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  node->grad = DenseMatrix(node->value.rows(), node->value.cols());
  return Tensor(std::move(node));
}

double Tensor::item() const {
  if (value().size() != 1) throw InputError("item: tensor is " + shape_of(value()) + ", expected 1x1");
  return value().data()[0];
}

void Tensor::zero_grad() { node_->grad = DenseMatrix(node_->value.rows(), node_->value.cols()); }

Tensor Tensor::make(DenseMatrix value, std::vector<Tensor> inputs, BackwardFn backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  const bool any = t_recording && std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.requires_grad(); });
  if (any) {
    node->requires_grad = true;
    node->backward = std::move(backward);
    node->inputs.reserve(inputs.size());
    for (auto& t : inputs) node->inputs.push_back(t.node_);
  }
  return Tensor(std::move(node));
}

void backward(const Tensor& root) {
  backward(root, DenseMatrix(root.rows(), root.cols(), 1.0));
}

void backward(const Tensor& root, const DenseMatrix& seed) {
  if (!root.requires_grad()) return;
  if (seed.rows() != root.rows() || seed.cols() != root.cols()) {
    throw InputError("backward: seed shape " + shape_of(seed) + " does not match " + shape_of(root.value()));
  }
  // Iterative post-order DFS gives a topological order (inputs first).
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{root.node().get(), 0}};
  seen.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  Node* top = root.node().get();
  if (top->grad.rows() != top->value.rows() || top->grad.cols() != top->value.cols()) {
    top->grad = DenseMatrix(top->value.rows(), top->value.cols());
  }
  accumulate(top->grad, seed);

  std::vector<DenseMatrix*> grad_in;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!node->backward) continue;  // leaf
    grad_in.assign(node->inputs.size(), nullptr);
    for (std::size_t k = 0; k < node->inputs.size(); ++k) {
      Node* in = node->inputs[k].get();
      if (!in->requires_grad) continue;
      if (in->grad.rows() != in->value.rows() || in->grad.cols() != in->value.cols()) {
        in->grad = DenseMatrix(in->value.rows(), in->value.cols());
      }
      grad_in[k] = &in->grad;
    }
    node->backward(node->grad, grad_in);
    // Intermediate gradients are not needed once propagated.
    node->grad = DenseMatrix();
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  return Tensor::make(multiply(a.value(), b.value()), {a, b},
                      [a = a.node(), b = b.node()](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        if (in[0]) accumulate(*in[0], multiply_nt(g, b->value));
                        if (in[1]) accumulate(*in[1], multiply_tn(a->value, g));
                      });
}

Tensor matmul_pattern(const Tensor& a, const Tensor& b, const Graph& pattern) {
  if (a.cols() != b.rows() || b.rows() != b.cols() || b.rows() != pattern.num_nodes())
    shape_error("matmul_pattern", a, b);
  // Same per-entry summation order as multiply(): k ascending.
  DenseMatrix out(a.rows(), b.cols());
  const DenseMatrix& av = a.value();
  const DenseMatrix& bv = b.value();
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double* o = out.row(i).data();
    for (NodeId k = 0; k < av.cols(); ++k) {
      const double aik = av(i, k);
      if (aik == 0.0) continue;
      const double* brow = bv.row(k).data();
      for (NodeId j : pattern.neighbors(k)) o[j] += aik * brow[j];
    }
  }
  return Tensor::make(std::move(out), {a, b},
                      [a = a.node(), b = b.node(), &pattern](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        const DenseMatrix& av = a->value;
                        const DenseMatrix& bv = b->value;
                        if (in[0]) {
                          DenseMatrix& ga = *in[0];
                          for (std::size_t i = 0; i < g.rows(); ++i)
                            for (NodeId k = 0; k < bv.rows(); ++k) {
                              double s = 0.0;
                              for (NodeId j : pattern.neighbors(k)) s += g(i, j) * bv(k, j);
                              ga(i, k) += s;
                            }
                        }
                        if (in[1]) {
                          DenseMatrix& gb = *in[1];
                          for (NodeId k = 0; k < bv.rows(); ++k)
                            for (NodeId j : pattern.neighbors(k)) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < g.rows(); ++i) s += av(i, k) * g(i, j);
                              gb(k, j) += s;
                            }
                        }
                      });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  return Tensor::make(multiply_nt(a.value(), b.value()), {a, b},
                      [a = a.node(), b = b.node()](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        // C = A B^T: dA = G B, dB = G^T A
                        if (in[0]) accumulate(*in[0], multiply(g, b->value));
                        if (in[1]) accumulate(*in[1], multiply_tn(g, a->value));
                      });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("add", a, b);
  DenseMatrix out = a.value();
  accumulate(out, b.value());
  return Tensor::make(std::move(out), {a, b}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) accumulate(*in[1], g);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("sub", a, b);
  DenseMatrix out = a.value();
  auto& d = out.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b.value().data()[k];
  return Tensor::make(std::move(out), {a, b}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) {
      auto& d = in[1]->data();
      for (std::size_t k = 0; k < d.size(); ++k) d[k] -= g.data()[k];
    }
  });
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) shape_error("add_bias", a, bias);
  DenseMatrix out = a.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < out.cols(); ++c) row[c] += bias.value()(0, c);
  }
  return Tensor::make(std::move(out), {a, bias}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    if (in[0]) accumulate(*in[0], g);
    if (in[1]) {
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) (*in[1])(0, c) += g(r, c);
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  DenseMatrix out = a.value();
  for (double& x : out.data()) x *= s;
  return Tensor::make(std::move(out), {a}, [s](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    auto& d = in[0]->data();
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += s * g.data()[k];
  });
}

Tensor relu(const Tensor& a) {
  DenseMatrix out = a.value();
  for (double& x : out.data()) x = x > 0.0 ? x : 0.0;
  return Tensor::make(std::move(out), {a}, [a = a.node()](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    auto& d = in[0]->data();
    const auto& x = a->value.data();
    for (std::size_t k = 0; k < d.size(); ++k)
      if (x[k] > 0.0) d[k] += g.data()[k];
  });
}

Tensor sigmoid(const Tensor& a) {
  DenseMatrix out = a.value();
  for (double& x : out.data()) {
    if (x >= 0.0) {
      x = 1.0 / (1.0 + std::exp(-x));
    } else {
      const double e = std::exp(x);
      x = e / (1.0 + e);
    }
  }
  auto y = std::make_shared<DenseMatrix>(out);
  return Tensor::make(std::move(out), {a}, [y](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    auto& d = in[0]->data();
    const auto& v = y->data();
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += g.data()[k] * v[k] * (1.0 - v[k]);
  });
}

Tensor masked_softmax(const Tensor& a, const DenseMatrix& mask) {
  if (mask.rows() != a.rows() || mask.cols() != a.cols()) {
    throw InputError("masked_softmax: mask " + shape_of(mask) + " does not match " + shape_of(a.value()));
  }
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  DenseMatrix out(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    double top = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t c = 0; c < m; ++c) {
      if (mask(r, c) != 0.0) {
        top = std::max(top, a.value()(r, c));
        any = true;
      }
    }
    if (!any) continue;
    double total = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      if (mask(r, c) != 0.0) {
        out(r, c) = std::exp(a.value()(r, c) - top);
        total += out(r, c);
      }
    }
    for (std::size_t c = 0; c < m; ++c) out(r, c) /= total;
  }
  auto p = std::make_shared<DenseMatrix>(out);
  return Tensor::make(std::move(out), {a}, [p](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    DenseMatrix& d = *in[0];
    for (std::size_t r = 0; r < p->rows(); ++r) {
      const auto prow = p->row(r);
      const auto grow = g.row(r);
      double dot = 0.0;
      for (std::size_t c = 0; c < prow.size(); ++c) dot += prow[c] * grow[c];
      auto drow = d.row(r);
      for (std::size_t c = 0; c < prow.size(); ++c) drow[c] += prow[c] * (grow[c] - dot);
    }
  });
}

Tensor trace(const Tensor& a) {
  if (a.rows() != a.cols()) throw InputError("trace: matrix is " + shape_of(a.value()) + ", expected square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a.value()(i, i);
  return Tensor::make(DenseMatrix(1, 1, t), {a}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    for (std::size_t i = 0; i < in[0]->rows(); ++i) (*in[0])(i, i) += g(0, 0);
  });
}

Tensor element(const Tensor& a, std::size_t r, std::size_t c) {
  if (r >= a.rows() || c >= a.cols()) {
    throw InputError("element: index (" + std::to_string(r) + ", " + std::to_string(c) + ") outside " +
                     shape_of(a.value()));
  }
  return Tensor::make(DenseMatrix(1, 1, a.value()(r, c)), {a},
                      [r, c](const DenseMatrix& g, std::span<DenseMatrix* const> in) { (*in[0])(r, c) += g(0, 0); });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.value().data()) s += x;
  return Tensor::make(DenseMatrix(1, 1, s), {a}, [](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    for (double& x : in[0]->data()) x += g(0, 0);
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw InputError("concat_cols: no inputs");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& t : parts) {
    if (t.rows() != rows) shape_error("concat_cols", parts.front(), t);
    cols += t.cols();
  }
  DenseMatrix out(rows, cols);
  std::vector<std::size_t> offsets;
  std::size_t at = 0;
  for (const auto& t : parts) {
    offsets.push_back(at);
    for (std::size_t r = 0; r < rows; ++r)
      std::copy(t.value().row(r).begin(), t.value().row(r).end(), out.row(r).begin() + static_cast<long>(at));
    at += t.cols();
  }
  return Tensor::make(std::move(out), std::vector<Tensor>(parts.begin(), parts.end()),
                      [offsets](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        for (std::size_t k = 0; k < in.size(); ++k) {
                          if (!in[k]) continue;
                          for (std::size_t r = 0; r < in[k]->rows(); ++r)
                            for (std::size_t c = 0; c < in[k]->cols(); ++c) (*in[k])(r, c) += g(r, offsets[k] + c);
                        }
                      });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw InputError("concat_rows: no inputs");
  const std::size_t cols = parts.front().cols();
  std::size_t rows = 0;
  for (const auto& t : parts) {
    if (t.cols() != cols) shape_error("concat_rows", parts.front(), t);
    rows += t.rows();
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  std::vector<std::size_t> offsets;
  for (const auto& t : parts) {
    offsets.push_back(data.size());
    data.insert(data.end(), t.value().data().begin(), t.value().data().end());
  }
  return Tensor::make(DenseMatrix(rows, cols, std::move(data)), std::vector<Tensor>(parts.begin(), parts.end()),
                      [offsets](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        for (std::size_t k = 0; k < in.size(); ++k) {
                          if (!in[k]) continue;
                          auto& d = in[k]->data();
                          for (std::size_t e = 0; e < d.size(); ++e) d[e] += g.data()[offsets[k] + e];
                        }
                      });
}

Tensor select_rows(const Tensor& a, std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), a.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= a.rows()) throw InputError("select_rows: row index out of range for " + shape_of(a.value()));
    std::copy(a.value().row(rows[r]).begin(), a.value().row(rows[r]).end(), out.row(r).begin());
  }
  std::vector<std::size_t> picked(rows.begin(), rows.end());
  return Tensor::make(std::move(out), {a}, [picked](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
    for (std::size_t r = 0; r < picked.size(); ++r) {
      auto dst = in[0]->row(picked[r]);
      auto src = g.row(r);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
  });
}

Tensor mse_loss(const Tensor& pred, const DenseMatrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw InputError("mse_loss: prediction " + shape_of(pred.value()) + " vs target " + shape_of(target));
  }
  const auto count = static_cast<double>(target.size());
  double total = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double e = pred.value().data()[k] - target.data()[k];
    total += e * e;
  }
  auto residual = std::make_shared<DenseMatrix>(pred.value());
  for (std::size_t k = 0; k < target.size(); ++k) residual->data()[k] -= target.data()[k];
  return Tensor::make(DenseMatrix(1, 1, total / count), {pred},
                      [residual, count](const DenseMatrix& g, std::span<DenseMatrix* const> in) {
                        auto& d = in[0]->data();
                        for (std::size_t k = 0; k < d.size(); ++k) d[k] += g(0, 0) * 2.0 * residual->data()[k] / count;
                      });
}

GradCheckReport grad_check(const std::function<Tensor()>& loss_fn, std::span<Tensor> params,
                           std::span<const std::string> names, double step, std::size_t max_coords_per_param,
                           std::uint64_t seed) {
  for (auto& p : params) p.zero_grad();
  backward(loss_fn());
  std::vector<DenseMatrix> analytic;
  for (auto& p : params) analytic.push_back(p.grad());

  Rng rng(seed);
  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& values = params[k].mutable_value().data();
    std::vector<std::size_t> coords(values.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (max_coords_per_param > 0 && coords.size() > max_coords_per_param) {
      rng.shuffle(std::span<std::size_t>(coords));
      coords.resize(max_coords_per_param);
    }
    for (std::size_t idx : coords) {
      const double saved = values[idx];
      values[idx] = saved + step;
      const double up = loss_fn().item();
      values[idx] = saved - step;
      const double down = loss_fn().item();
      values[idx] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[k].data()[idx];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      const double rel = std::abs(a - numeric) / denom;
      ++report.checked;
      if (rel > report.max_rel_error || report.worst.empty()) {
        report.max_rel_error = std::max(report.max_rel_error, rel);
        if (rel >= report.max_rel_error) {
          const std::string name = k < names.size() ? names[k] : "param" + std::to_string(k);
          report.worst = name + "[" + std::to_string(idx / params[k].cols()) + "," +
                         std::to_string(idx % params[k].cols()) + "]";
        }
      }
    }
  }
  for (auto& p : params) p.zero_grad();
  return report;
}

}  // namespace walkpool::ad
