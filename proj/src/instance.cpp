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

#include "enroute/instance.hpp"

#include <algorithm>
#include <cmath>

#include "enroute/error.hpp"

namespace enroute {

void Instance::validate() const {
  if (node_count() < 1) throw Error("instance: no nodes");
  if (customer_count() < 1) throw Error("instance: no customers");
  if (!coords.allFinite()) throw Error("instance: non-finite coordinate");
  if (is_cvrp()) {
    if (demands.size() != node_count())
      throw Error("instance: demand count " + std::to_string(demands.size()) +
                  " does not match node count " + std::to_string(node_count()));
    if (demands(0) != 0.0) throw Error("instance: depot demand must be 0");
    if (capacity <= 0.0) throw Error("instance: capacity must be positive");
    for (int i = 1; i < node_count(); ++i) {
      if (demands(i) < 0.0) throw Error("instance: negative demand");
      if (demands(i) > capacity)
        throw Error("instance: demand of node " + std::to_string(i) +
                    " exceeds capacity");
    }
  } else if (demands.size() != 0) {
    throw Error("instance: TSP carries no demands");
  }
}

bool operator==(const Instance& a, const Instance& b) {
  return a.kind == b.kind && a.distance_mode == b.distance_mode &&
         a.name == b.name && a.coords.rows() == b.coords.rows() &&
         a.coords == b.coords && a.demands.size() == b.demands.size() &&
         a.demands == b.demands && a.capacity == b.capacity;
}

void GenConfig::validate() const {
  if (const auto* range = std::get_if<UniformScaleRange>(&scale_sampler)) {
    if (range->lo > range->hi || range->lo < 1)
      throw Error("gen config: invalid scale range");
  } else if (std::get<FixedScale>(scale_sampler).n < 1) {
    throw Error("gen config: scale must be at least 1");
  }
  const auto& t = route_size_dist;
  if (!(t.min <= t.mode && t.mode <= t.max))
    throw Error("gen config: triangular parameters must satisfy min<=mode<=max");
  if (demand_dist.lo < 1 || demand_dist.lo > demand_dist.hi)
    throw Error("gen config: invalid demand range");
}

int sample_scale(const ScaleSampler& sampler, Rng& rng) {
  if (const auto* range = std::get_if<UniformScaleRange>(&sampler))
    return static_cast<int>(rng.uniform_int(range->lo, range->hi));
  return std::get<FixedScale>(sampler).n;
}

double capacity_for_route_size(const Eigen::VectorXd& demands, double r) {
  double total = 0.0;
  int customers = 0;
  for (int i = 0; i < demands.size(); ++i) {
    if (i == 0 && demands.size() > 1 && demands(0) == 0.0) continue;
    total += demands(i);
    ++customers;
  }
  if (customers == 0) throw Error("capacity_for_route_size: no customers");
  return std::ceil(r * total / customers);
}

CapacityDraw gen_capacity(const Eigen::VectorXd& demands,
                          const TriangularDist& dist, Rng& rng) {
  if (demands.size() == 0) throw Error("gen_capacity: empty demand vector");
  const double max_demand = demands.maxCoeff();
  CapacityDraw draw;
  do {
    draw.route_size = rng.triangular(dist.min, dist.mode, dist.max);
    draw.capacity = capacity_for_route_size(demands, draw.route_size);
  } while (draw.capacity < max_demand);
  return draw;
}

Instance gen_instance(const GenConfig& config, ProblemKind kind, Rng& rng) {
  config.validate();
  const int n = sample_scale(config.scale_sampler, rng);
  if (n < 1) throw Error("gen_instance: scale must be at least 1");

  Instance inst;
  inst.kind = kind;
  inst.distance_mode = DistanceMode::kContinuous;

  const int rows = kind == ProblemKind::kCvrp ? n + 1 : n;
  inst.coords.resize(rows, 2);
  for (int i = 0; i < rows; ++i) {
    inst.coords(i, 0) = rng.uniform01();
    inst.coords(i, 1) = rng.uniform01();
  }

  if (kind == ProblemKind::kCvrp) {
    inst.demands.resize(rows);
    inst.demands(0) = 0.0;
    for (int i = 1; i < rows; ++i)
      inst.demands(i) = static_cast<double>(
          rng.uniform_int(config.demand_dist.lo, config.demand_dist.hi));
    inst.capacity =
        gen_capacity(inst.demands, config.route_size_dist, rng).capacity;
  }

  inst.validate();
  return inst;
}

double expected_route_size(const Instance& inst) {
  if (!inst.is_cvrp())
    throw Error("expected_route_size: not applicable to TSP");
  const double total = inst.demands.sum();
  if (total <= 0.0) throw Error("expected_route_size: total demand is zero");
  return inst.capacity / (total / inst.customer_count());
}

int batch_size_for(int scale, int bs_init) {
  if (scale < 1 || bs_init < 1) throw Error("batch_size_for: invalid inputs");
  const double raw =
      bs_init * std::pow(100.0 / static_cast<double>(scale), 1.6);
  return std::max(1, static_cast<int>(std::floor(raw + 0.5)));
}

}  // namespace enroute
