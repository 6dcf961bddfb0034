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

#include "enroute/trainer.hpp"

#include <algorithm>
#include <numeric>

namespace enroute {

std::vector<double> rs_weights(const std::vector<double>& rewards, int xi) {
  const int count = static_cast<int>(rewards.size());
  if (xi < 1) throw Error("rs_weights: xi must be at least 1");
  if (count < xi) throw Error("rs_weights: fewer trajectories than xi");

  // Stable sort, best reward first; reward ties keep trajectory order.
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rewards[a] > rewards[b]; });

  const double baseline = rewards[order[xi - 1]];
  const double a_max = rewards[order[0]] - baseline;
  std::vector<double> weights(count, 0.0);
  if (a_max == 0.0) return weights;  // fully tied top group
  for (int r = 0; r < xi; ++r)
    weights[order[r]] = (rewards[order[r]] - baseline) / a_max;
  return weights;
}

std::vector<double> shared_baseline_weights(
    const std::vector<double>& rewards) {
  if (rewards.size() < 2)
    throw Error("shared_baseline_weights: need at least two trajectories");
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / rewards.size();
  std::vector<double> weights(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i)
    weights[i] = rewards[i] - mean;
  return weights;
}

}  // namespace enroute
