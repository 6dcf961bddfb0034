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

#ifndef ENROUTE_DENSE_HPP_
#define ENROUTE_DENSE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "enroute/env.hpp"
#include "enroute/error.hpp"

namespace enroute {

template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// C * tanh(u), elementwise. Output lies strictly inside (-C, C).
template <class Derived>
auto clip_scores(const Eigen::MatrixBase<Derived>& u,
                 typename Derived::Scalar c) {
  using Scalar = typename Derived::Scalar;
  if (c <= Scalar(0)) throw Error("clip_scores: C must be positive");
  return (u.array().tanh() * c).matrix().eval();
}

// Softmax over the unmasked entries; masked entries get exactly zero.
template <class Derived>
VecX<typename Derived::Scalar> masked_softmax(
    const Eigen::MatrixBase<Derived>& scores, const Mask& mask) {
  using Scalar = typename Derived::Scalar;
  if (scores.size() != mask.size())
    throw Error("masked_softmax: size mismatch");
  Scalar max_val = std::numeric_limits<Scalar>::lowest();
  bool any = false;
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    if (mask(i)) {
      any = true;
      max_val = std::max(max_val, scores(i));
    }
  if (!any) throw Error("masked_softmax: no valid entries");
  VecX<Scalar> probs = VecX<Scalar>::Zero(scores.size());
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    if (mask(i)) {
      probs(i) = std::exp(scores(i) - max_val);
      sum += probs(i);
    }
  probs /= sum;
  return probs;
}

}  // namespace enroute

#endif  // ENROUTE_DENSE_HPP_
