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

#ifndef ENROUTE_ENSEMBLE_HPP_
#define ENROUTE_ENSEMBLE_HPP_

#include <map>
#include <string>
#include <vector>

#include "enroute/dense.hpp"
#include "enroute/global_policy.hpp"
#include "enroute/local_policy.hpp"

namespace enroute {

// ---- score-level free functions --------------------------------------------

// Elementwise sum of the two policies' raw scores.
template <class Derived>
auto ensemble_scores(const Eigen::MatrixBase<Derived>& u_global,
                     const Eigen::MatrixBase<Derived>& u_local) {
  if (u_global.size() != u_local.size())
    throw Error("ensemble_scores: length mismatch");
  return (u_global + u_local).eval();
}

// Clip, mask, softmax: the path from raw ensemble scores to a distribution.
template <class Derived>
VecX<typename Derived::Scalar> action_distribution(
    const Eigen::MatrixBase<Derived>& u_ens, const Mask& mask,
    typename Derived::Scalar clip) {
  if (!mask.any()) throw Error("action_distribution: no valid action");
  return masked_softmax(clip_scores(u_ens, clip), mask);
}

enum class SelectMode { kGreedy, kSample };

// Greedy: argmax with lowest-index tie break. Sample: categorical draw.
template <class Scalar>
int select_action(const VecX<Scalar>& probs, SelectMode mode, Rng* rng) {
  if (mode == SelectMode::kGreedy) {
    int best = -1;
    Scalar best_p = -1;
    for (Eigen::Index i = 0; i < probs.size(); ++i)
      if (probs(i) > best_p) {
        best_p = probs(i);
        best = static_cast<int>(i);
      }
    return best;
  }
  if (!rng) throw Error("select_action: sampling requires an rng");
  const double u = rng->uniform01();
  double cum = 0.0;
  int last_positive = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) <= 0) continue;
    last_positive = static_cast<int>(i);
    cum += static_cast<double>(probs(i));
    if (u < cum) return static_cast<int>(i);
  }
  return last_positive;  // rounding fell through; take the last valid slot
}

// Gated mixture of the two per-policy distributions (the aggregation variant
// where base policies keep their own softmax).
template <class Scalar>
VecX<Scalar> moe_gate_distribution(const VecX<Scalar>& pi_global,
                                   const VecX<Scalar>& pi_local,
                                   Scalar omega) {
  if (pi_global.size() != pi_local.size())
    throw Error("moe_gate_distribution: size mismatch");
  if (!(omega > Scalar(0) && omega < Scalar(1)) && omega != Scalar(0) &&
      omega != Scalar(1))
    throw Error("moe_gate_distribution: omega outside [0, 1]");
  return omega * pi_global + (Scalar(1) - omega) * pi_local;
}

// ---- the ensemble policy ----------------------------------------------------

enum class Aggregation { kSumClip, kMoeGate };

struct PolicyConfig {
  GlobalPolicyConfig global;
  LocalPolicyConfig local;
  double clip = 50.0;
  bool use_local = true;
  // Force the local score vector to exact zeros (diagnostic mode: the
  // ensemble must then reproduce the pure global policy step for step).
  bool local_zero = false;
  Aggregation aggregation = Aggregation::kSumClip;
  // Experiment flag: additional local scorers with their own neighbor
  // counts; the ensemble then adds the mean of all local score vectors.
  std::vector<int> extra_local_neighbor_counts;

  static PolicyConfig preset(const std::string& name);
  std::map<std::string, std::string> to_meta(ProblemKind kind) const;
  static std::pair<PolicyConfig, ProblemKind> from_meta(
      const std::map<std::string, std::string>& meta);
};

template <class Scalar>
class EnsemblePolicy {
 public:
  using Tape = nn::Tape<Scalar>;
  using Var = nn::Var<Scalar>;

  EnsemblePolicy(ProblemKind kind, const PolicyConfig& config,
                 std::uint64_t init_seed)
      : kind_(kind), config_(config) {
    Rng rng(init_seed);
    global_ = std::make_unique<GlobalPolicy<Scalar>>(store_, kind,
                                                     config.global, rng);
    local_ = std::make_unique<LocalPolicy<Scalar>>(store_, kind, config.local,
                                                   rng);
    for (std::size_t i = 0; i < config.extra_local_neighbor_counts.size();
         ++i) {
      LocalPolicyConfig extra = config.local;
      extra.neighbor_count = config.extra_local_neighbor_counts[i];
      extra_locals_.push_back(std::make_unique<LocalPolicy<Scalar>>(
          store_, kind, extra, rng, "local" + std::to_string(i + 1)));
    }
    gate_ = nn::Linear<Scalar>(store_, "gate", config.global.embed_dim, 1, rng);
  }

  ProblemKind kind() const { return kind_; }
  const PolicyConfig& config() const { return config_; }
  PolicyConfig& mutable_config() { return config_; }
  nn::ParamStore<Scalar>& params() { return store_; }
  const nn::ParamStore<Scalar>& params() const { return store_; }
  GlobalPolicy<Scalar>& global() { return *global_; }
  LocalPolicy<Scalar>& local() { return *local_; }
  const std::vector<std::unique_ptr<LocalPolicy<Scalar>>>& extra_locals()
      const {
    return extra_locals_;
  }

  struct Encodings {
    typename GlobalPolicy<Scalar>::Encodings global;
    LocalInstanceInfo local_info;
    const Instance* instance = nullptr;
  };

  Encodings encode(Tape& tape, const Instance& inst) const {
    Encodings enc;
    enc.global = global_->encode(tape, inst);
    enc.local_info = local_instance_info(inst);
    enc.instance = &inst;
    return enc;
  }

  struct StepScores {
    Var query;     // projected decoder context
    Var u_global;  // rows x nodes
    Var u_local;   // rows x nodes (zeros when the local policy is disabled)
    Var u_ens;     // rows x nodes
  };

  StepScores step_scores(Tape& tape, const Encodings& enc,
                         const std::vector<const ConstructionState*>& states,
                         const ad::BoolMat& valid) const {
    StepScores out;
    out.query = global_->build_query(tape, enc.global, states);
    out.u_global = global_->scores(tape, enc.global, out.query, valid);
    if (config_.use_local && !config_.local_zero) {
      const auto features = local_->build_features(states, enc.local_info);
      out.u_local =
          local_->scores(tape, features, enc.instance->node_count());
      if (!extra_locals_.empty()) {
        // Mean over all local scorers.
        for (const auto& extra : extra_locals_) {
          const auto extra_features =
              extra->build_features(states, enc.local_info);
          out.u_local = ad::add(
              out.u_local, extra->scores(tape, extra_features,
                                         enc.instance->node_count()));
        }
        out.u_local = ad::scale(
            out.u_local,
            Scalar(1) / static_cast<Scalar>(1 + extra_locals_.size()));
      }
      out.u_ens = ad::add(out.u_global, out.u_local);
    } else if (config_.local_zero) {
      out.u_local = tape.constant(ad::MatX<Scalar>::Zero(
          static_cast<Eigen::Index>(states.size()),
          enc.instance->node_count()));
      out.u_ens = ad::add(out.u_global, out.u_local);
    } else {
      out.u_local = tape.constant(ad::MatX<Scalar>::Zero(
          static_cast<Eigen::Index>(states.size()),
          enc.instance->node_count()));
      out.u_ens = out.u_global;
    }
    return out;
  }

  // C * tanh(u_ens): the pre-softmax logits shared by sampling and replay.
  Var clipped_logits(Tape& tape, const StepScores& scores) const {
    (void)tape;
    return ad::scale(ad::vtanh(scores.u_ens),
                     static_cast<Scalar>(config_.clip));
  }

  // Per-row action distributions for one step (value path).
  ad::MatX<Scalar> step_distributions(Tape& tape, const StepScores& scores,
                                      const ad::BoolMat& valid) const {
    if (config_.aggregation == Aggregation::kMoeGate) {
      Var omega = ad::vsigmoid(gate_.forward(tape, scores.query));
      Var pg = ad::masked_softmax_rows(
          ad::scale(ad::vtanh(scores.u_global),
                    static_cast<Scalar>(config_.clip)),
          valid);
      Var pl = ad::masked_softmax_rows(
          ad::scale(ad::vtanh(scores.u_local),
                    static_cast<Scalar>(config_.clip)),
          valid);
      ad::MatX<Scalar> mixed =
          (pg.value().array().colwise() * omega.value().col(0).array() +
           pl.value().array().colwise() *
               (Scalar(1) - omega.value().col(0).array()))
              .matrix();
      return mixed;
    }
    return ad::masked_softmax_rows(clipped_logits(tape, scores), valid)
        .value();
  }

 private:
  ProblemKind kind_;
  PolicyConfig config_;
  nn::ParamStore<Scalar> store_;
  std::unique_ptr<GlobalPolicy<Scalar>> global_;
  std::unique_ptr<LocalPolicy<Scalar>> local_;
  std::vector<std::unique_ptr<LocalPolicy<Scalar>>> extra_locals_;
  nn::Linear<Scalar> gate_;
};

}  // namespace enroute

#endif  // ENROUTE_ENSEMBLE_HPP_
