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

#ifndef ENROUTE_ENV_HPP_
#define ENROUTE_ENV_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "enroute/instance.hpp"

namespace enroute {

using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// One partially constructed tour. Value type; cheap to copy at desk scales.
struct ConstructionState {
  const Instance* instance = nullptr;
  std::vector<char> visited;  // per node, includes the depot slot for CVRP
  std::vector<int> tour;
  int current = -1;
  int first = -1;             // the start node of the trajectory
  double remaining_load = 0;  // CVRP only
  int step_count = 0;         // actions taken so far
  int visited_customers = 0;

  bool terminal() const;
};

// When false, CVRP states begin directly on the start customer instead of
// recording the depot as the explicit first tour element. Solutions are
// identical either way; the flag exists to compare the two conventions.
struct ResetOptions {
  bool depot_prefix = true;
};

std::vector<ConstructionState> reset(const Instance& inst,
                                     const std::vector<int>& start_nodes,
                                     const ResetOptions& opts = {});

// Deterministic multi-start selection: all customers when N <= cap, otherwise
// an evenly strided subset of size cap.
std::vector<int> default_start_nodes(const Instance& inst, int cap = 1000);

Mask action_mask(const ConstructionState& state);

ConstructionState step(const ConstructionState& state, int action);
// In-place variant used by the rollout loops.
void apply_step(ConstructionState& state, int action);

double tour_length(const Instance& inst, const std::vector<int>& tour);

struct ViolationReport {
  std::vector<std::string> violations;
  std::string str() const;
};

// Empty optional means the tour is feasible.
std::optional<ViolationReport> feasibility_check(const Instance& inst,
                                                 const std::vector<int>& tour);

struct Solution {
  std::vector<int> tour;
  double objective = 0.0;
  double reward() const { return -objective; }
};

Solution make_solution(const Instance& inst, const std::vector<int>& tour);

// CVRP helper: splits a depot-delimited tour into per-route customer lists.
std::vector<std::vector<int>> split_routes(const Instance& inst,
                                           const std::vector<int>& tour);

}  // namespace enroute

#endif  // ENROUTE_ENV_HPP_
