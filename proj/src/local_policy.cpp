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

#include "enroute/local_policy.hpp"

#include <algorithm>
#include <cmath>

#include "enroute/error.hpp"

namespace enroute {

std::vector<int> knn_neighbors(const ConstructionState& state, int k) {
  if (k < 1) throw Error("knn_neighbors: K must be at least 1");
  const Instance& inst = *state.instance;
  if (state.terminal()) throw Error("knn_neighbors: state is terminal");

  std::vector<std::pair<double, int>> candidates;
  candidates.reserve(inst.node_count());
  const int first_customer = inst.is_cvrp() ? 1 : 0;
  for (int i = first_customer; i < inst.node_count(); ++i)
    if (!state.visited[i] && i != state.current)
      candidates.emplace_back(inst.euclidean(state.current, i), i);
  if (inst.is_cvrp() && state.current != 0)
    candidates.emplace_back(inst.euclidean(state.current, 0), 0);

  const std::size_t keep =
      std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(k));
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end());
  std::vector<int> neighbors;
  neighbors.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) neighbors.push_back(candidates[i].second);
  return neighbors;
}

LocalFeatures polar_features(const Instance& inst, int current,
                             const std::vector<int>& neighbors) {
  if (neighbors.empty()) throw Error("polar_features: no neighbors");

  LocalFeatures features;
  features.neighbor_nodes = neighbors;
  features.rho.reserve(neighbors.size());
  features.theta.reserve(neighbors.size());

  const double cx = inst.coords(current, 0);
  const double cy = inst.coords(current, 1);
  double max_dist = 0.0;
  for (int node : neighbors) {
    const double dx = inst.coords(node, 0) - cx;
    const double dy = inst.coords(node, 1) - cy;
    // Same distance formula as the neighbor search; a second formula can
    // disagree in the last ulp and break the sorted order on tied radii.
    const double dist = inst.euclidean(current, node);
    max_dist = std::max(max_dist, dist);
    features.rho.push_back(dist);
    features.theta.push_back(std::atan2(dy, dx));
  }
  if (max_dist == 0.0)
    throw Error("polar_features: neighborhood is fully coincident");
  for (double& rho : features.rho) rho /= max_dist;

  // Callers pass distance-sorted neighbors; normalization keeps the order.
  for (std::size_t i = 1; i < features.rho.size(); ++i)
    if (features.rho[i] < features.rho[i - 1])
      throw Error("polar_features: neighbors must be sorted by distance");

  features.scale_feature = inst.customer_count() / 1000.0;
  if (inst.is_cvrp()) {
    features.route_feature = expected_route_size(inst) / 25.0;
    features.has_route_feature = true;
  }
  return features;
}

LocalInstanceInfo local_instance_info(const Instance& inst) {
  LocalInstanceInfo info;
  info.scale_feature = inst.customer_count() / 1000.0;
  if (inst.is_cvrp()) {
    info.route_feature = expected_route_size(inst) / 25.0;
    info.has_route_feature = true;
  }
  return info;
}

}  // namespace enroute
