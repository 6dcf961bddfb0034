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

#include "enroute/env.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "enroute/error.hpp"

namespace enroute {

bool ConstructionState::terminal() const {
  if (visited_customers < instance->customer_count()) return false;
  // CVRP additionally closes the last route at the depot.
  if (instance->is_cvrp()) return current == 0;
  return true;
}

std::vector<ConstructionState> reset(const Instance& inst,
                                     const std::vector<int>& start_nodes,
                                     const ResetOptions& opts) {
  if (start_nodes.empty()) throw Error("reset: no start nodes");
  if (static_cast<int>(start_nodes.size()) > inst.customer_count())
    throw Error("reset: more start nodes than customers");
  std::set<int> seen;
  for (int s : start_nodes) {
    if (!seen.insert(s).second) throw Error("reset: duplicate start node");
    if (inst.is_cvrp()) {
      if (s < 1 || s >= inst.node_count())
        throw Error("reset: start node must be a customer");
    } else if (s < 0 || s >= inst.node_count()) {
      throw Error("reset: start node out of range");
    }
  }

  std::vector<ConstructionState> states;
  states.reserve(start_nodes.size());
  for (int s : start_nodes) {
    ConstructionState st;
    st.instance = &inst;
    st.visited.assign(inst.node_count(), 0);
    st.first = s;
    st.current = s;
    st.step_count = 1;
    st.visited_customers = 1;
    st.visited[s] = 1;
    if (inst.is_cvrp()) {
      if (opts.depot_prefix) st.tour.push_back(0);
      st.tour.push_back(s);
      st.remaining_load = inst.capacity - inst.demands(s);
      if (st.remaining_load < 0)
        throw Error("reset: start demand exceeds capacity");
    } else {
      st.tour.push_back(s);
    }
    states.push_back(std::move(st));
  }
  return states;
}

std::vector<int> default_start_nodes(const Instance& inst, int cap) {
  const int n = inst.customer_count();
  const int count = std::min(n, cap);
  const int base = inst.is_cvrp() ? 1 : 0;
  std::vector<int> starts;
  starts.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Evenly strided over the customer index range.
    const int idx = static_cast<int>(
        static_cast<long long>(i) * n / count);
    starts.push_back(base + idx);
  }
  return starts;
}

Mask action_mask(const ConstructionState& state) {
  const Instance& inst = *state.instance;
  if (state.terminal()) throw Error("action_mask: state is terminal");
  Mask mask = Mask::Constant(inst.node_count(), false);
  if (inst.is_cvrp()) {
    for (int i = 1; i < inst.node_count(); ++i) {
      if (state.visited[i]) continue;
      if (inst.demands(i) > state.remaining_load + 1e-9) continue;
      mask(i) = true;
    }
    // Standing at the depot forbids a zero-length depot loop.
    mask(0) = state.current != 0;
  } else {
    for (int i = 0; i < inst.node_count(); ++i)
      if (!state.visited[i]) mask(i) = true;
  }
  return mask;
}

void apply_step(ConstructionState& state, int action) {
  const Instance& inst = *state.instance;
  const Mask mask = action_mask(state);
  if (action < 0 || action >= inst.node_count() || !mask(action))
    throw Error("step: action " + std::to_string(action) + " is masked");

  state.tour.push_back(action);
  state.current = action;
  ++state.step_count;
  if (inst.is_cvrp()) {
    if (action == 0) {
      state.remaining_load = inst.capacity;
    } else {
      state.visited[action] = 1;
      ++state.visited_customers;
      state.remaining_load -= inst.demands(action);
    }
    // Close the final route as soon as the last customer is served.
    if (state.visited_customers == inst.customer_count() &&
        state.current != 0) {
      state.tour.push_back(0);
      state.current = 0;
      ++state.step_count;
      state.remaining_load = inst.capacity;
    }
  } else {
    state.visited[action] = 1;
    ++state.visited_customers;
  }
}

ConstructionState step(const ConstructionState& state, int action) {
  ConstructionState next = state;
  apply_step(next, action);
  return next;
}

double tour_length(const Instance& inst, const std::vector<int>& tour) {
  if (auto report = feasibility_check(inst, tour))
    throw Error("tour_length: infeasible tour: " +
                report->violations.front());
  double total = 0.0;
  const int m = static_cast<int>(tour.size());
  for (int i = 0; i < m; ++i)
    total += inst.distance(tour[i], tour[(i + 1) % m]);
  return total;
}

std::string ViolationReport::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

std::optional<ViolationReport> feasibility_check(const Instance& inst,
                                                 const std::vector<int>& tour) {
  ViolationReport report;
  std::vector<int> visit_count(inst.node_count(), 0);
  for (int node : tour) {
    if (node < 0 || node >= inst.node_count()) {
      report.violations.push_back("node index out of range: " +
                                  std::to_string(node));
      return report;
    }
    ++visit_count[node];
  }

  const int first_customer = inst.is_cvrp() ? 1 : 0;
  for (int i = first_customer; i < inst.node_count(); ++i) {
    if (visit_count[i] == 0)
      report.violations.push_back("uncovered: " + std::to_string(i));
    else if (visit_count[i] > 1)
      report.violations.push_back("duplicate visit: " + std::to_string(i));
  }

  if (inst.is_cvrp()) {
    if (tour.empty() || tour.front() != 0 || tour.back() != 0)
      report.violations.push_back("tour must start and end at the depot");
    double load = 0.0;
    int route = 1;
    int route_len = 0;
    for (std::size_t i = 1; i < tour.size(); ++i) {
      if (tour[i] == 0) {
        if (route_len == 0)
          report.violations.push_back("empty route #" + std::to_string(route));
        if (load > inst.capacity + 1e-9)
          report.violations.push_back(
              "capacity exceeded on route #" + std::to_string(route) + ": " +
              std::to_string(load) + " > " + std::to_string(inst.capacity));
        load = 0.0;
        route_len = 0;
        ++route;
      } else {
        load += inst.demands(tour[i]);
        ++route_len;
      }
    }
  }

  if (report.violations.empty()) return std::nullopt;
  return report;
}

Solution make_solution(const Instance& inst, const std::vector<int>& tour) {
  Solution sol;
  sol.tour = tour;
  sol.objective = tour_length(inst, tour);
  return sol;
}

std::vector<std::vector<int>> split_routes(const Instance& inst,
                                           const std::vector<int>& tour) {
  std::vector<std::vector<int>> routes;
  if (!inst.is_cvrp()) {
    routes.push_back(tour);
    return routes;
  }
  std::vector<int> route;
  for (std::size_t i = 1; i < tour.size(); ++i) {
    if (tour[i] == 0) {
      routes.push_back(route);
      route.clear();
    } else {
      route.push_back(tour[i]);
    }
  }
  if (!route.empty()) routes.push_back(route);
  return routes;
}

}  // namespace enroute
