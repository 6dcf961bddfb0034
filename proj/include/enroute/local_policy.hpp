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

#ifndef ENROUTE_LOCAL_POLICY_HPP_
#define ENROUTE_LOCAL_POLICY_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "enroute/autodiff.hpp"
#include "enroute/env.hpp"
#include "enroute/instance.hpp"
#include "enroute/nn.hpp"

namespace enroute {

struct LocalPolicyConfig {
  int neighbor_count = 100;     // K
  double remote_penalty = -1.0;
  int hidden_dim = 512;
};

// The K nearest candidate nodes of the current node, nearest first, ties by
// index. Candidates are the unvisited customers, plus the depot for CVRP
// when the vehicle is away from it. Fewer than K candidates: all of them.
std::vector<int> knn_neighbors(const ConstructionState& state, int k);

// Polar view of a neighborhood, centered at the current node. Radii are
// normalized by the farthest neighbor, so max rho == 1 exactly; angles are
// measured from the global +x axis. Translation and uniform scaling of the
// instance leave these features unchanged.
struct LocalFeatures {
  std::vector<int> neighbor_nodes;  // ascending by rho
  std::vector<double> rho;
  std::vector<double> theta;
  double scale_feature = 0.0;   // N / 1000
  double route_feature = 0.0;   // r / 25 (CVRP only)
  bool has_route_feature = false;
};

LocalFeatures polar_features(const Instance& inst, int current,
                             const std::vector<int>& neighbors);

// Per-instance constants consumed by the local scorer.
struct LocalInstanceInfo {
  double scale_feature = 0.0;
  double route_feature = 0.0;
  bool has_route_feature = false;
};

LocalInstanceInfo local_instance_info(const Instance& inst);

// Scores the K-nearest polar neighborhood of the current node with a fixed
// width MLP; every node outside the neighborhood gets the remote penalty.
// Slot i of the MLP output corresponds to the i-th nearest neighbor and is
// biased by -rho_i; padded slots are forced to the penalty.
template <class Scalar>
class LocalPolicy {
 public:
  using Tape = nn::Tape<Scalar>;
  using Var = nn::Var<Scalar>;

  LocalPolicy(nn::ParamStore<Scalar>& store, ProblemKind kind,
              const LocalPolicyConfig& config, Rng& rng,
              const std::string& name = "local")
      : kind_(kind), config_(config) {
    mlp_ = nn::Mlp<Scalar>(store, name + "/mlp", input_width(),
                           config.hidden_dim, config.neighbor_count, rng);
  }

  const LocalPolicyConfig& config() const { return config_; }

  int input_width() const {
    return 2 * config_.neighbor_count +
           (kind_ == ProblemKind::kCvrp ? 2 : 1);
  }

  struct BatchFeatures {
    ad::MatX<Scalar> inputs;                  // rows x input_width
    std::vector<std::vector<int>> slot_nodes;  // per row, real slots only
    std::vector<std::vector<Scalar>> slot_rho;
  };

  BatchFeatures build_features(
      const std::vector<const ConstructionState*>& states,
      const LocalInstanceInfo& info) const {
    const int k = config_.neighbor_count;
    BatchFeatures batch;
    batch.inputs.resize(static_cast<Eigen::Index>(states.size()),
                        input_width());
    batch.slot_nodes.resize(states.size());
    batch.slot_rho.resize(states.size());
    for (std::size_t r = 0; r < states.size(); ++r) {
      const ConstructionState& st = *states[r];
      const auto neighbors = knn_neighbors(st, k);
      const auto features = polar_features(*st.instance, st.current, neighbors);
      auto row = batch.inputs.row(static_cast<Eigen::Index>(r));
      for (int slot = 0; slot < k; ++slot) {
        if (slot < static_cast<int>(features.neighbor_nodes.size())) {
          row(2 * slot) = static_cast<Scalar>(features.rho[slot]);
          row(2 * slot + 1) = static_cast<Scalar>(features.theta[slot]);
        } else {
          row(2 * slot) = Scalar(1);  // padding: unit radius, zero angle
          row(2 * slot + 1) = Scalar(0);
        }
      }
      row(2 * k) = static_cast<Scalar>(info.scale_feature);
      if (kind_ == ProblemKind::kCvrp)
        row(2 * k + 1) = static_cast<Scalar>(info.route_feature);
      batch.slot_nodes[r] = features.neighbor_nodes;
      batch.slot_rho[r].reserve(features.rho.size());
      for (double rho : features.rho)
        batch.slot_rho[r].push_back(static_cast<Scalar>(rho));
    }
    return batch;
  }

  // u_local over all nodes for every row.
  Var scores(Tape& tape, const BatchFeatures& batch, int node_count) const {
    Var mlp_out = mlp_.forward(tape, tape.constant(batch.inputs));
    return scatter_scores(tape, mlp_out, batch, node_count,
                          static_cast<Scalar>(config_.remote_penalty));
  }

  // Single-state convenience path (plain Eigen, no tape).
  ad::VecX<Scalar> scores_single(const ConstructionState& state,
                                 const LocalInstanceInfo& info) const {
    BatchFeatures batch = build_features({&state}, info);
    ad::MatX<Scalar> hidden =
        (batch.inputs * mlp_.hidden.weight->value).rowwise() +
        mlp_.hidden.bias->value.row(0);
    hidden = hidden.array().max(Scalar(0)).matrix();
    ad::MatX<Scalar> out =
        (hidden * mlp_.output.weight->value).rowwise() +
        mlp_.output.bias->value.row(0);
    ad::VecX<Scalar> u = ad::VecX<Scalar>::Constant(
        state.instance->node_count(),
        static_cast<Scalar>(config_.remote_penalty));
    for (std::size_t slot = 0; slot < batch.slot_nodes[0].size(); ++slot)
      u(batch.slot_nodes[0][slot]) =
          out(0, static_cast<Eigen::Index>(slot)) - batch.slot_rho[0][slot];
    return u;
  }

 private:
  static Var scatter_scores(Tape& tape, Var mlp_out,
                            const BatchFeatures& batch, int node_count,
                            Scalar penalty) {
    const Eigen::Index rows = mlp_out.rows();
    ad::MatX<Scalar> out =
        ad::MatX<Scalar>::Constant(rows, node_count, penalty);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& nodes = batch.slot_nodes[static_cast<std::size_t>(r)];
      const auto& rho = batch.slot_rho[static_cast<std::size_t>(r)];
      for (std::size_t slot = 0; slot < nodes.size(); ++slot)
        out(r, nodes[slot]) =
            mlp_out.value()(r, static_cast<Eigen::Index>(slot)) - rho[slot];
    }
    const int src_id = mlp_out.id;
    auto slot_nodes = batch.slot_nodes;
    return tape.make_op(
        std::move(out), tape.needs_grad(src_id),
        [src_id, slot_nodes](Tape& t, const ad::MatX<Scalar>& g) {
          ad::MatX<Scalar> d =
              ad::MatX<Scalar>::Zero(g.rows(), t.value(src_id).cols());
          for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const auto& nodes = slot_nodes[static_cast<std::size_t>(r)];
            for (std::size_t slot = 0; slot < nodes.size(); ++slot)
              d(r, static_cast<Eigen::Index>(slot)) = g(r, nodes[slot]);
          }
          t.accumulate(src_id, d);
        });
  }

  ProblemKind kind_;
  LocalPolicyConfig config_;
  nn::Mlp<Scalar> mlp_;
};

}  // namespace enroute

#endif  // ENROUTE_LOCAL_POLICY_HPP_
