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

#ifndef ENROUTE_ROLLOUT_HPP_
#define ENROUTE_ROLLOUT_HPP_

#include <limits>
#include <vector>

#include "enroute/ensemble.hpp"
#include "enroute/vrplib.hpp"

namespace enroute {

struct TrajectoryRecord {
  int start = -1;
  std::vector<int> actions;  // actions taken after the start placement
  double cost = 0.0;
  double reward() const { return -cost; }
};

// Builds the per-row validity matrix for a set of states.
inline ad::BoolMat batch_mask(
    const std::vector<const ConstructionState*>& states, int node_count) {
  ad::BoolMat valid(states.size(), node_count);
  for (std::size_t r = 0; r < states.size(); ++r) {
    const Mask m = action_mask(*states[r]);
    for (int c = 0; c < node_count; ++c) valid(r, c) = m(c);
  }
  return valid;
}

// One trajectory per start node, all driven in lockstep so each construction
// step is a single batched forward pass. `model_inst` feeds the policy;
// `eval_inst` prices the finished tours (they differ when benchmark
// coordinates were normalized for the model).
template <class Scalar>
std::vector<TrajectoryRecord> run_rollouts(
    const EnsemblePolicy<Scalar>& policy, const Instance& model_inst,
    const Instance& eval_inst, const std::vector<int>& starts, SelectMode mode,
    Rng* rng) {
  nn::Tape<Scalar> tape(false);
  const auto enc = policy.encode(tape, model_inst);
  const int mark = tape.size();

  auto states = reset(model_inst, starts);
  std::vector<TrajectoryRecord> records(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    records[i].start = starts[i];

  while (true) {
    std::vector<int> active;
    std::vector<const ConstructionState*> rows;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!states[i].terminal()) {
        active.push_back(static_cast<int>(i));
        rows.push_back(&states[i]);
      }
    if (active.empty()) break;

    const ad::BoolMat valid = batch_mask(rows, model_inst.node_count());
    const auto scores = policy.step_scores(tape, enc, rows, valid);
    const ad::MatX<Scalar> probs =
        policy.step_distributions(tape, scores, valid);

    for (std::size_t r = 0; r < active.size(); ++r) {
      const VecX<Scalar> row =
          probs.row(static_cast<Eigen::Index>(r)).transpose();
      const int action = select_action(row, mode, rng);
      apply_step(states[active[r]], action);
      records[active[r]].actions.push_back(action);
    }
    tape.truncate(mark);
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<int> tour = states[i].tour;
    if (eval_inst.is_cvrp() && (tour.empty() || tour.front() != 0))
      tour.insert(tour.begin(), 0);
    records[i].cost = tour_length(eval_inst, tour);
  }
  return records;
}

enum class NormalizePolicy { kAuto, kAlways, kNever };

struct SolveOptions {
  SelectMode mode = SelectMode::kGreedy;
  int max_starts = 1000;  // multi-start count is min(N, max_starts)
  NormalizePolicy normalize = NormalizePolicy::kAuto;
};

struct SolveResult {
  Solution solution;
  int rollouts = 0;
  bool normalized = false;
};

template <class Scalar>
SolveResult solve_instance(const EnsemblePolicy<Scalar>& policy,
                           const Instance& inst, const SolveOptions& opts,
                           Rng* rng = nullptr) {
  if (policy.kind() != inst.kind)
    throw Error("solve: checkpoint was trained for a different problem kind");

  bool normalize = opts.normalize == NormalizePolicy::kAlways;
  if (opts.normalize == NormalizePolicy::kAuto) {
    normalize = inst.coords.minCoeff() < 0.0 || inst.coords.maxCoeff() > 1.0;
  }
  Instance model_inst = inst;
  if (normalize) {
    model_inst = normalize_coords(inst).first;
    model_inst.distance_mode = DistanceMode::kContinuous;
  }

  const auto starts = default_start_nodes(inst, opts.max_starts);
  const auto records =
      run_rollouts(policy, model_inst, inst, starts, opts.mode, rng);

  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].cost < records[best].cost) best = i;

  // Reconstruct the winning tour.
  auto state = reset(inst, {records[best].start}).front();
  for (int action : records[best].actions) apply_step(state, action);

  SolveResult result;
  result.solution = make_solution(inst, state.tour);
  result.rollouts = static_cast<int>(records.size());
  result.normalized = normalize;
  return result;
}

}  // namespace enroute

#endif  // ENROUTE_ROLLOUT_HPP_
