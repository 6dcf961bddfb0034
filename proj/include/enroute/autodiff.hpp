// Copyright 2026 The enroute Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENROUTE_AUTODIFF_HPP_
#define ENROUTE_AUTODIFF_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "enroute/error.hpp"

namespace enroute::ad {

template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using BoolMat = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
class Tape;

// Handle into a Tape. Copying is free; the tape owns all storage.
template <class Scalar>
struct Var {
  Tape<Scalar>* tape = nullptr;
  int id = -1;

  const MatX<Scalar>& value() const { return tape->value(id); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
};

// Reverse-mode tape over dense matrices. Nodes are appended during the
// forward pass; backward() walks them in reverse creation order. With
// recording disabled the same op functions run value-only, which is the
// inference path.
template <class Scalar>
class Tape {
 public:
  using Mat = MatX<Scalar>;

  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }

  // Leaf whose storage lives elsewhere (a model parameter). Gradients are
  // accumulated straight into *grad, which must be pre-sized and zeroed by
  // the caller.
  Var<Scalar> leaf(const Mat& value, Mat* grad) {
    Node node;
    node.ext_value = &value;
    node.ext_grad = grad;
    node.needs_grad = recording_ && grad != nullptr;
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  Var<Scalar> constant(Mat value) {
    Node node;
    node.storage = std::move(value);
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  // Tape-owned leaf that collects a gradient; lets callers differentiate with
  // respect to inputs rather than parameters.
  Var<Scalar> input(Mat value) {
    Node node;
    node.storage = std::move(value);
    node.needs_grad = recording_;
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  const Mat& value(int id) const {
    const Node& n = nodes_[id];
    return n.ext_value ? *n.ext_value : n.storage;
  }

  // Gradient of a non-external node after backward(). Zero matrix when the
  // node was never reached.
  Mat gradient(int id) const {
    const Node& n = nodes_[id];
    if (n.ext_grad) return *n.ext_grad;
    if (n.grad.size() == 0) return Mat::Zero(value(id).rows(), value(id).cols());
    return n.grad;
  }

  int size() const { return static_cast<int>(nodes_.size()); }

  // Drops nodes with id >= mark. Only valid between backward passes; used by
  // the no-grad rollout loop to bound memory while keeping encoder nodes.
  void truncate(int mark) { nodes_.resize(mark); }

  void clear() { nodes_.clear(); }

  void backward(Var<Scalar> root) {
    if (!recording_) throw Error("backward: tape is not recording");
    if (root.value().size() != 1)
      throw Error("backward: root must be a scalar");
    Node& r = nodes_[root.id];
    if (r.grad.size() == 0) r.grad = Mat::Zero(1, 1);
    r.grad(0, 0) += Scalar(1);
    for (int id = root.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (!n.needs_grad || !n.backward) continue;
      if (n.grad.size() == 0) continue;  // not on a path to the root
      n.backward(*this, n.grad);
    }
  }

  // --- used by op implementations ---

  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  Var<Scalar> make_op(Mat value, bool needs_grad,
                      std::function<void(Tape&, const Mat&)> backward) {
    Node node;
    node.storage = std::move(value);
    node.needs_grad = recording_ && needs_grad;
    if (node.needs_grad) node.backward = std::move(backward);
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  template <class Expr>
  void accumulate(int id, const Expr& g) {
    Node& n = nodes_[id];
    if (!n.needs_grad) return;
    if (n.ext_grad) {
      *n.ext_grad += g;
      return;
    }
    if (n.grad.size() == 0)
      n.grad = Mat::Zero(value(id).rows(), value(id).cols());
    n.grad += g;
  }

 private:
  struct Node {
    Mat storage;
    const Mat* ext_value = nullptr;
    Mat grad;
    Mat* ext_grad = nullptr;
    bool needs_grad = false;
    std::function<void(Tape&, const Mat&)> backward;
  };

  std::vector<Node> nodes_;
  bool recording_;
};

namespace detail {
template <class Scalar>
bool any_grad(std::initializer_list<Var<Scalar>> vars) {
  for (const auto& v : vars)
    if (v.tape->needs_grad(v.id)) return true;
  return false;
}
}  // namespace detail

// C = A * B
template <class Scalar>
Var<Scalar> matmul(Var<Scalar> a, Var<Scalar> b) {
  Tape<Scalar>& tape = *a.tape;
  if (a.cols() != b.rows()) throw Error("matmul: inner dimensions differ");
  MatX<Scalar> out = a.value() * b.value();
  const int ia = a.id, ib = b.id;
  return tape.make_op(std::move(out), detail::any_grad({a, b}),
                      [ia, ib](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g * t.value(ib).transpose());
                        t.accumulate(ib, t.value(ia).transpose() * g);
                      });
}

// C = A * B^T
template <class Scalar>
Var<Scalar> matmul_nt(Var<Scalar> a, Var<Scalar> b) {
  Tape<Scalar>& tape = *a.tape;
  if (a.cols() != b.cols()) throw Error("matmul_nt: inner dimensions differ");
  MatX<Scalar> out = a.value() * b.value().transpose();
  const int ia = a.id, ib = b.id;
  return tape.make_op(std::move(out), detail::any_grad({a, b}),
                      [ia, ib](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g * t.value(ib));
                        t.accumulate(ib, g.transpose() * t.value(ia));
                      });
}

template <class Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b) {
  Tape<Scalar>& tape = *a.tape;
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("add: shape mismatch");
  MatX<Scalar> out = a.value() + b.value();
  const int ia = a.id, ib = b.id;
  return tape.make_op(std::move(out), detail::any_grad({a, b}),
                      [ia, ib](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g);
                        t.accumulate(ib, g);
                      });
}

// Adds a 1 x cols bias row to every row of a.
template <class Scalar>
Var<Scalar> add_rowvec(Var<Scalar> a, Var<Scalar> bias) {
  Tape<Scalar>& tape = *a.tape;
  if (bias.rows() != 1 || bias.cols() != a.cols())
    throw Error("add_rowvec: bias must be 1 x cols");
  MatX<Scalar> out = a.value().rowwise() + bias.value().row(0);
  const int ia = a.id, ib = bias.id;
  return tape.make_op(std::move(out), detail::any_grad({a, bias}),
                      [ia, ib](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g);
                        t.accumulate(ib, g.colwise().sum());
                      });
}

template <class Scalar>
Var<Scalar> scale(Var<Scalar> a, Scalar factor) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out = a.value() * factor;
  const int ia = a.id;
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, factor](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g * factor);
                      });
}

template <class Scalar>
Var<Scalar> vtanh(Var<Scalar> a) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out = a.value().array().tanh();
  const int ia = a.id;
  return tape.make_op(
      std::move(out), detail::any_grad({a}),
      [ia](Tape<Scalar>& t, const MatX<Scalar>& g) {
        // recomputed from the input; cheaper than caching a matrix per node
        MatX<Scalar> tanh_val = t.value(ia).array().tanh();
        t.accumulate(
            ia, (g.array() * (Scalar(1) - tanh_val.array().square())).matrix());
      });
}

template <class Scalar>
Var<Scalar> vrelu(Var<Scalar> a) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out =
      a.value().array().max(Scalar(0)).matrix();
  const int ia = a.id;
  return tape.make_op(
      std::move(out), detail::any_grad({a}),
      [ia](Tape<Scalar>& t, const MatX<Scalar>& g) {
        t.accumulate(
            ia, (g.array() * (t.value(ia).array() > Scalar(0)).template cast<Scalar>())
                    .matrix());
      });
}

template <class Scalar>
Var<Scalar> vsigmoid(Var<Scalar> a) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out =
      (Scalar(1) / ((-a.value().array()).exp() + Scalar(1))).matrix();
  const int ia = a.id;
  MatX<Scalar> cached = out;
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, cached](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(
                            ia, (g.array() * cached.array() *
                                 (1 - cached.array()))
                                    .matrix());
                      });
}

template <class Scalar>
Var<Scalar> concat_cols(const std::vector<Var<Scalar>>& parts) {
  if (parts.empty()) throw Error("concat_cols: empty");
  Tape<Scalar>& tape = *parts.front().tape;
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index total = 0;
  bool needs = false;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw Error("concat_cols: row mismatch");
    total += p.cols();
    needs = needs || tape.needs_grad(p.id);
  }
  MatX<Scalar> out(rows, total);
  std::vector<int> ids;
  std::vector<Eigen::Index> widths;
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.middleCols(off, p.cols()) = p.value();
    ids.push_back(p.id);
    widths.push_back(p.cols());
    off += p.cols();
  }
  return tape.make_op(std::move(out), needs,
                      [ids, widths](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        Eigen::Index off = 0;
                        for (std::size_t k = 0; k < ids.size(); ++k) {
                          t.accumulate(ids[k], g.middleCols(off, widths[k]));
                          off += widths[k];
                        }
                      });
}

template <class Scalar>
Var<Scalar> concat_rows(const std::vector<Var<Scalar>>& parts) {
  if (parts.empty()) throw Error("concat_rows: empty");
  Tape<Scalar>& tape = *parts.front().tape;
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index total = 0;
  bool needs = false;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw Error("concat_rows: column mismatch");
    total += p.rows();
    needs = needs || tape.needs_grad(p.id);
  }
  MatX<Scalar> out(total, cols);
  std::vector<int> ids;
  std::vector<Eigen::Index> heights;
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.middleRows(off, p.rows()) = p.value();
    ids.push_back(p.id);
    heights.push_back(p.rows());
    off += p.rows();
  }
  return tape.make_op(std::move(out), needs,
                      [ids, heights](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        Eigen::Index off = 0;
                        for (std::size_t k = 0; k < ids.size(); ++k) {
                          t.accumulate(ids[k], g.middleRows(off, heights[k]));
                          off += heights[k];
                        }
                      });
}

template <class Scalar>
Var<Scalar> slice_cols(Var<Scalar> a, Eigen::Index offset, Eigen::Index count) {
  Tape<Scalar>& tape = *a.tape;
  if (offset < 0 || offset + count > a.cols())
    throw Error("slice_cols: out of range");
  MatX<Scalar> out = a.value().middleCols(offset, count);
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, offset, count, rows, cols](Tape<Scalar>& t,
                                                      const MatX<Scalar>& g) {
                        MatX<Scalar> full = MatX<Scalar>::Zero(rows, cols);
                        full.middleCols(offset, count) = g;
                        t.accumulate(ia, full);
                      });
}

template <class Scalar>
Var<Scalar> gather_rows(Var<Scalar> a, std::vector<int> indices) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out(static_cast<Eigen::Index>(indices.size()), a.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= a.rows())
      throw Error("gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(r)) = a.value().row(indices[r]);
  }
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, indices, rows, cols](Tape<Scalar>& t,
                                                const MatX<Scalar>& g) {
                        MatX<Scalar> full = MatX<Scalar>::Zero(rows, cols);
                        for (std::size_t r = 0; r < indices.size(); ++r)
                          full.row(indices[r]) +=
                              g.row(static_cast<Eigen::Index>(r));
                        t.accumulate(ia, full);
                      });
}

// Row-wise softmax over the entries flagged valid; invalid entries get
// exactly zero probability. Every row must have at least one valid entry.
template <class Scalar>
Var<Scalar> masked_softmax_rows(Var<Scalar> a, const BoolMat& valid) {
  Tape<Scalar>& tape = *a.tape;
  if (valid.rows() != a.rows() || valid.cols() != a.cols())
    throw Error("masked_softmax_rows: mask shape mismatch");
  const auto& x = a.value();
  MatX<Scalar> p = MatX<Scalar>::Zero(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Scalar max_val = std::numeric_limits<Scalar>::lowest();
    bool any = false;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (valid(r, c)) {
        any = true;
        max_val = std::max(max_val, x(r, c));
      }
    if (!any) throw Error("masked_softmax_rows: fully masked row");
    Scalar sum = 0;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (valid(r, c)) {
        p(r, c) = std::exp(x(r, c) - max_val);
        sum += p(r, c);
      }
    p.row(r) /= sum;
  }
  const int ia = a.id;
  MatX<Scalar> cached = p;
  BoolMat mask = valid;
  return tape.make_op(
      std::move(p), detail::any_grad({a}),
      [ia, cached, mask](Tape<Scalar>& t, const MatX<Scalar>& g) {
        MatX<Scalar> dx = MatX<Scalar>::Zero(cached.rows(), cached.cols());
        for (Eigen::Index r = 0; r < cached.rows(); ++r) {
          Scalar inner = 0;
          for (Eigen::Index c = 0; c < cached.cols(); ++c)
            if (mask(r, c)) inner += g(r, c) * cached(r, c);
          for (Eigen::Index c = 0; c < cached.cols(); ++c)
            if (mask(r, c)) dx(r, c) = cached(r, c) * (g(r, c) - inner);
        }
        t.accumulate(ia, dx);
      });
}

template <class Scalar>
Var<Scalar> softmax_rows(Var<Scalar> a) {
  return masked_softmax_rows(a, BoolMat::Constant(a.rows(), a.cols(), true));
}

// Fused masked log-softmax with per-row action pick: out(r, 0) =
// log softmax(a(r, valid))[action_r]. Numerically stable; gradient is
// (one_hot - p) restricted to valid entries.
template <class Scalar>
Var<Scalar> log_prob_pick(Var<Scalar> a, const BoolMat& valid,
                          const std::vector<int>& actions) {
  Tape<Scalar>& tape = *a.tape;
  const auto& x = a.value();
  if (static_cast<Eigen::Index>(actions.size()) != x.rows())
    throw Error("log_prob_pick: one action per row required");
  MatX<Scalar> out(x.rows(), 1);
  MatX<Scalar> p = MatX<Scalar>::Zero(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const int action = actions[r];
    if (action < 0 || action >= x.cols() || !valid(r, action))
      throw Error("log_prob_pick: picked action is masked");
    Scalar max_val = std::numeric_limits<Scalar>::lowest();
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (valid(r, c)) max_val = std::max(max_val, x(r, c));
    Scalar sum = 0;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (valid(r, c)) {
        p(r, c) = std::exp(x(r, c) - max_val);
        sum += p(r, c);
      }
    p.row(r) /= sum;
    out(r, 0) = x(r, action) - max_val - std::log(sum);
  }
  const int ia = a.id;
  BoolMat mask = valid;
  std::vector<int> acts = actions;
  return tape.make_op(
      std::move(out), detail::any_grad({a}),
      [ia, p, mask, acts](Tape<Scalar>& t, const MatX<Scalar>& g) {
        MatX<Scalar> dx = MatX<Scalar>::Zero(p.rows(), p.cols());
        for (Eigen::Index r = 0; r < p.rows(); ++r)
          for (Eigen::Index c = 0; c < p.cols(); ++c)
            if (mask(r, c))
              dx(r, c) = g(r, 0) * ((c == acts[r] ? Scalar(1) : Scalar(0)) -
                                    p(r, c));
        t.accumulate(ia, dx);
      });
}

// Normalizes every column across rows (mean 0, variance 1) then applies a
// per-column affine transform; the token-set normalization used between
// encoder sublayers.
template <class Scalar>
Var<Scalar> feature_norm(Var<Scalar> x, Var<Scalar> gamma, Var<Scalar> beta,
                         Scalar eps = Scalar(1e-5)) {
  Tape<Scalar>& tape = *x.tape;
  if (gamma.rows() != 1 || gamma.cols() != x.cols() || beta.rows() != 1 ||
      beta.cols() != x.cols())
    throw Error("feature_norm: affine params must be 1 x cols");
  const auto& v = x.value();
  const Eigen::Index n = v.rows();
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> mean = v.colwise().mean();
  MatX<Scalar> centered = v.rowwise() - mean;
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> var =
      centered.array().square().colwise().sum() / Scalar(n);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> inv_std =
      (var.array() + eps).rsqrt();
  MatX<Scalar> xhat =
      (centered.array().rowwise() * inv_std.array()).matrix();
  MatX<Scalar> out =
      (xhat.array().rowwise() * gamma.value().row(0).array()).matrix();
  out.rowwise() += beta.value().row(0);
  const int ix = x.id, ig = gamma.id, ib = beta.id;
  MatX<Scalar> xhat_c = xhat;
  MatX<Scalar> inv_std_c = inv_std;
  return tape.make_op(
      std::move(out), detail::any_grad({x, gamma, beta}),
      [ix, ig, ib, xhat_c, inv_std_c, n](Tape<Scalar>& t,
                                         const MatX<Scalar>& g) {
        const auto gamma_row = t.value(ig).row(0);
        t.accumulate(ig, (g.array() * xhat_c.array()).colwise().sum().matrix());
        t.accumulate(ib, g.colwise().sum());
        // d xhat
        MatX<Scalar> dxhat =
            (g.array().rowwise() * gamma_row.array()).matrix();
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> sum_dxhat =
            dxhat.colwise().sum();
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> sum_dxhat_xhat =
            (dxhat.array() * xhat_c.array()).colwise().sum();
        MatX<Scalar> dx = dxhat * Scalar(n);
        dx = dx.rowwise() - sum_dxhat;
        dx.array() -= xhat_c.array().rowwise() * sum_dxhat_xhat.array();
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> factor =
            inv_std_c.row(0) / Scalar(n);
        dx.array() = dx.array().rowwise() * factor.array();
        t.accumulate(ix, dx);
      });
}

// out(r, :) = w(r, 0) * x(r, :)
template <class Scalar>
Var<Scalar> row_scale(Var<Scalar> x, Var<Scalar> w) {
  Tape<Scalar>& tape = *x.tape;
  if (w.cols() != 1 || w.rows() != x.rows())
    throw Error("row_scale: weight must be rows x 1");
  MatX<Scalar> out = x.value().array().colwise() * w.value().col(0).array();
  const int ix = x.id, iw = w.id;
  return tape.make_op(
      std::move(out), detail::any_grad({x, w}),
      [ix, iw](Tape<Scalar>& t, const MatX<Scalar>& g) {
        t.accumulate(
            ix, (g.array().colwise() * t.value(iw).col(0).array()).matrix());
        t.accumulate(iw, (g.array() * t.value(ix).array())
                             .rowwise()
                             .sum()
                             .matrix());
      });
}

// Column vector of per-row sums.
template <class Scalar>
Var<Scalar> row_sums(Var<Scalar> a) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out = a.value().rowwise().sum();
  const int ia = a.id;
  const Eigen::Index cols = a.cols();
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, cols](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, g.col(0).replicate(1, cols));
                      });
}

// Scalar result: sum of all entries.
template <class Scalar>
Var<Scalar> sum_all(Var<Scalar> a) {
  Tape<Scalar>& tape = *a.tape;
  MatX<Scalar> out(1, 1);
  out(0, 0) = a.value().sum();
  const int ia = a.id;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, rows, cols](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia,
                                     MatX<Scalar>::Constant(rows, cols, g(0, 0)));
                      });
}

// Scalar result: dot product of a column vector with fixed weights.
template <class Scalar>
Var<Scalar> dot_const(Var<Scalar> a, const VecX<Scalar>& weights) {
  Tape<Scalar>& tape = *a.tape;
  if (a.cols() != 1 || a.rows() != weights.size())
    throw Error("dot_const: shape mismatch");
  MatX<Scalar> out(1, 1);
  out(0, 0) = (a.value().col(0).array() * weights.array()).sum();
  const int ia = a.id;
  VecX<Scalar> w = weights;
  return tape.make_op(std::move(out), detail::any_grad({a}),
                      [ia, w](Tape<Scalar>& t, const MatX<Scalar>& g) {
                        t.accumulate(ia, (w * g(0, 0)).matrix());
                      });
}

}  // namespace enroute::ad

#endif  // ENROUTE_AUTODIFF_HPP_
