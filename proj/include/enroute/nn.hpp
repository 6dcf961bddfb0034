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

#ifndef ENROUTE_NN_HPP_
#define ENROUTE_NN_HPP_

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "enroute/autodiff.hpp"
#include "enroute/rng.hpp"

namespace enroute::nn {

using ad::MatX;
using ad::Tape;
using ad::Var;
using ad::VecX;

template <class Scalar>
struct Parameter {
  std::string name;
  MatX<Scalar> value;
  MatX<Scalar> grad;
};

// Owns every learnable array of a model, in registration order. Registration
// order is deterministic by construction, which keeps optimizer sweeps and
// checkpoints reproducible.
template <class Scalar>
class ParamStore {
 public:
  Parameter<Scalar>& create(const std::string& name, Eigen::Index rows,
                            Eigen::Index cols) {
    for (const auto& p : params_)
      if (p->name == name) throw Error("duplicate parameter name: " + name);
    auto param = std::make_unique<Parameter<Scalar>>();
    param->name = name;
    param->value = MatX<Scalar>::Zero(rows, cols);
    param->grad = MatX<Scalar>::Zero(rows, cols);
    params_.push_back(std::move(param));
    return *params_.back();
  }

  Parameter<Scalar>& create_uniform(const std::string& name, Eigen::Index rows,
                                    Eigen::Index cols, Eigen::Index fan_in,
                                    Rng& rng) {
    Parameter<Scalar>& p = create(name, rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r)
        p.value(r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
    return p;
  }

  std::size_t size() const { return params_.size(); }
  Parameter<Scalar>& at(std::size_t i) { return *params_[i]; }
  const Parameter<Scalar>& at(std::size_t i) const { return *params_[i]; }

  Parameter<Scalar>* find(const std::string& name) {
    for (auto& p : params_)
      if (p->name == name) return p.get();
    return nullptr;
  }

  void zero_grads() {
    for (auto& p : params_) p->grad.setZero();
  }

  void scale_grads(Scalar factor) {
    for (auto& p : params_) p->grad *= factor;
  }

  bool grads_finite() const {
    for (const auto& p : params_)
      if (!p->grad.allFinite()) return false;
    return true;
  }

  Eigen::Index coefficient_count() const {
    Eigen::Index total = 0;
    for (const auto& p : params_) total += p->value.size();
    return total;
  }

  // Flattened views used by the finite-difference checks.
  Eigen::VectorXd flatten_values() const {
    Eigen::VectorXd out(coefficient_count());
    Eigen::Index at = 0;
    for (const auto& p : params_)
      for (Eigen::Index i = 0; i < p->value.size(); ++i)
        out(at++) = static_cast<double>(p->value.data()[i]);
    return out;
  }

  Eigen::VectorXd flatten_grads() const {
    Eigen::VectorXd out(coefficient_count());
    Eigen::Index at = 0;
    for (const auto& p : params_)
      for (Eigen::Index i = 0; i < p->value.size(); ++i)
        out(at++) = static_cast<double>(p->grad.data()[i]);
    return out;
  }

  void unflatten_values(const Eigen::VectorXd& flat) {
    if (flat.size() != coefficient_count())
      throw Error("unflatten: size mismatch");
    Eigen::Index at = 0;
    for (auto& p : params_)
      for (Eigen::Index i = 0; i < p->value.size(); ++i)
        p->value.data()[i] = static_cast<Scalar>(flat(at++));
  }

 private:
  std::vector<std::unique_ptr<Parameter<Scalar>>> params_;
};

template <class Scalar>
Var<Scalar> param_leaf(Tape<Scalar>& tape, Parameter<Scalar>& p) {
  return tape.leaf(p.value, &p.grad);
}

// y = x W + b
template <class Scalar>
struct Linear {
  Parameter<Scalar>* weight = nullptr;
  Parameter<Scalar>* bias = nullptr;

  Linear() = default;
  Linear(ParamStore<Scalar>& store, const std::string& name, Eigen::Index in,
         Eigen::Index out, Rng& rng) {
    weight = &store.create_uniform(name + "/W", in, out, in, rng);
    bias = &store.create_uniform(name + "/b", 1, out, in, rng);
  }

  Var<Scalar> forward(Tape<Scalar>& tape, Var<Scalar> x) const {
    return ad::add_rowvec(ad::matmul(x, param_leaf(tape, *weight)),
                          param_leaf(tape, *bias));
  }
};

// Two affine layers with a ReLU between them.
template <class Scalar>
struct Mlp {
  Linear<Scalar> hidden;
  Linear<Scalar> output;

  Mlp() = default;
  Mlp(ParamStore<Scalar>& store, const std::string& name, Eigen::Index in,
      Eigen::Index hidden_dim, Eigen::Index out, Rng& rng)
      : hidden(store, name + "/l1", in, hidden_dim, rng),
        output(store, name + "/l2", hidden_dim, out, rng) {}

  Var<Scalar> forward(Tape<Scalar>& tape, Var<Scalar> x) const {
    return output.forward(tape, ad::vrelu(hidden.forward(tape, x)));
  }
};

// Scaled dot-product attention, several heads, concatenated and projected.
// No positional signal anywhere: outputs are equivariant to row permutation.
template <class Scalar>
struct MultiHeadAttention {
  Linear<Scalar> proj_q, proj_k, proj_v, proj_out;
  int heads = 1;
  Eigen::Index model_dim = 0;

  MultiHeadAttention() = default;
  MultiHeadAttention(ParamStore<Scalar>& store, const std::string& name,
                     Eigen::Index dim, int head_count, Rng& rng)
      : proj_q(store, name + "/q", dim, dim, rng),
        proj_k(store, name + "/k", dim, dim, rng),
        proj_v(store, name + "/v", dim, dim, rng),
        proj_out(store, name + "/o", dim, dim, rng),
        heads(head_count),
        model_dim(dim) {
    if (dim % head_count != 0)
      throw Error("attention: dim must be divisible by head count");
  }

  // queries: Q rows; keys/values computed from `context` rows. `valid`, when
  // non-null, masks context entries per query row.
  Var<Scalar> forward(Tape<Scalar>& tape, Var<Scalar> query_input,
                      Var<Scalar> context, const ad::BoolMat* valid = nullptr) const {
    Var<Scalar> q = proj_q.forward(tape, query_input);
    Var<Scalar> k = proj_k.forward(tape, context);
    Var<Scalar> v = proj_v.forward(tape, context);
    return attend(tape, q, k, v, valid);
  }

  // Variant with precomputed key/value projections (decoder fast path).
  Var<Scalar> attend(Tape<Scalar>& tape, Var<Scalar> q, Var<Scalar> k,
                     Var<Scalar> v, const ad::BoolMat* valid = nullptr) const {
    const Eigen::Index dk = model_dim / heads;
    const Scalar inv_sqrt_dk =
        Scalar(1) / std::sqrt(static_cast<Scalar>(dk));
    std::vector<Var<Scalar>> head_outputs;
    head_outputs.reserve(heads);
    for (int h = 0; h < heads; ++h) {
      Var<Scalar> qh = ad::slice_cols(q, h * dk, dk);
      Var<Scalar> kh = ad::slice_cols(k, h * dk, dk);
      Var<Scalar> vh = ad::slice_cols(v, h * dk, dk);
      Var<Scalar> scores = ad::scale(ad::matmul_nt(qh, kh), inv_sqrt_dk);
      Var<Scalar> attn = valid ? ad::masked_softmax_rows(scores, *valid)
                               : ad::softmax_rows(scores);
      head_outputs.push_back(ad::matmul(attn, vh));
    }
    return proj_out.forward(tape, ad::concat_cols(head_outputs));
  }
};

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a ParamStore.
template <class Scalar>
class Adam {
 public:
  Adam(ParamStore<Scalar>& store, const AdamOptions& opts = {})
      : store_(&store), opts_(opts) {
    for (std::size_t i = 0; i < store.size(); ++i) {
      m_.push_back(MatX<Scalar>::Zero(store.at(i).value.rows(),
                                      store.at(i).value.cols()));
      v_.push_back(MatX<Scalar>::Zero(store.at(i).value.rows(),
                                      store.at(i).value.cols()));
    }
  }

  void step() {
    if (!store_->grads_finite())
      throw Error("adam: non-finite gradient");
    ++t_;
    const Scalar b1 = static_cast<Scalar>(opts_.beta1);
    const Scalar b2 = static_cast<Scalar>(opts_.beta2);
    const Scalar lr = static_cast<Scalar>(opts_.learning_rate);
    const Scalar eps = static_cast<Scalar>(opts_.epsilon);
    const Scalar bc1 =
        Scalar(1) - static_cast<Scalar>(std::pow(opts_.beta1, t_));
    const Scalar bc2 =
        Scalar(1) - static_cast<Scalar>(std::pow(opts_.beta2, t_));
    for (std::size_t i = 0; i < store_->size(); ++i) {
      auto& p = store_->at(i);
      m_[i] = b1 * m_[i] + (Scalar(1) - b1) * p.grad;
      v_[i] = (b2 * v_[i].array() +
               (Scalar(1) - b2) * p.grad.array().square())
                  .matrix();
      p.value.array() -= lr * (m_[i].array() / bc1) /
                         ((v_[i].array() / bc2).sqrt() + eps);
      if (!p.value.allFinite())
        throw Error("adam: parameter became non-finite: " + p.name);
    }
  }

  long long step_count() const { return t_; }

 private:
  ParamStore<Scalar>* store_;
  AdamOptions opts_;
  std::vector<MatX<Scalar>> m_, v_;
  long long t_ = 0;
};

struct GradCheckResult {
  double max_rel_err = 0.0;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central-difference comparison of an analytic gradient. Components where
// both gradients sit below the dead zone are treated as matching zeros: with
// h = 1e-5 at float64 the difference quotient carries ~1e-10 of rounding
// noise for O(1) function values, so relative error is meaningless there.
inline GradCheckResult grad_check(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& point, const Eigen::VectorXd& analytic_grad,
    double h = 1e-5, double dead_zone = 1e-6) {
  GradCheckResult result;
  Eigen::VectorXd x = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    const double keep = x(i);
    x(i) = keep + h;
    const double f_plus = f(x);
    x(i) = keep - h;
    const double f_minus = f(x);
    x(i) = keep;
    const double numeric = (f_plus - f_minus) / (2 * h);
    const double analytic = analytic_grad(i);
    const double magnitude = std::max(std::abs(numeric), std::abs(analytic));
    if (magnitude < dead_zone) continue;
    const double rel = std::abs(numeric - analytic) / magnitude;
    if (rel > result.max_rel_err) {
      result.max_rel_err = rel;
      result.worst_index = i;
      result.analytic = analytic;
      result.numeric = numeric;
    }
  }
  return result;
}

}  // namespace enroute::nn

#endif  // ENROUTE_NN_HPP_
