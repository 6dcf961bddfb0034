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

#ifndef ENROUTE_INSTANCE_HPP_
#define ENROUTE_INSTANCE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "enroute/rng.hpp"

namespace enroute {

enum class ProblemKind { kTsp, kCvrp };

// How pairwise distances are evaluated. Benchmark files with EDGE_WEIGHT_TYPE
// EUC_2D round every edge to the nearest integer; synthetic training data
// uses plain Euclidean lengths.
enum class DistanceMode { kContinuous, kRoundedInt };

struct Instance {
  ProblemKind kind = ProblemKind::kTsp;
  DistanceMode distance_mode = DistanceMode::kContinuous;
  std::string name;

  // TSP: one row per node (all N of them). CVRP: N+1 rows, row 0 is the depot.
  Eigen::MatrixX2d coords;
  // CVRP: N+1 entries, demands(0) == 0. Empty for TSP.
  Eigen::VectorXd demands;
  double capacity = 0.0;

  bool is_cvrp() const { return kind == ProblemKind::kCvrp; }
  int node_count() const { return static_cast<int>(coords.rows()); }
  int customer_count() const {
    return is_cvrp() ? node_count() - 1 : node_count();
  }

  double euclidean(int i, int j) const {
    return (coords.row(i) - coords.row(j)).norm();
  }

  double distance(int i, int j) const {
    const double d = euclidean(i, j);
    // Benchmark nint convention: round half away from zero via floor(d + 0.5).
    return distance_mode == DistanceMode::kRoundedInt ? std::floor(d + 0.5) : d;
  }

  // Throws Error if any structural invariant is violated.
  void validate() const;
};

bool operator==(const Instance& a, const Instance& b);

struct TriangularDist {
  double min = 3.0;
  double mode = 6.0;
  double max = 25.0;
};

struct FixedScale {
  int n = 100;
};
struct UniformScaleRange {
  int lo = 100;
  int hi = 500;
};
using ScaleSampler = std::variant<FixedScale, UniformScaleRange>;

struct IntUniformDist {
  int lo = 1;
  int hi = 9;
};

struct GenConfig {
  ScaleSampler scale_sampler = FixedScale{100};
  TriangularDist route_size_dist;   // route size r used for the capacity draw
  IntUniformDist demand_dist;       // per-customer demand
  std::uint64_t seed = 0;

  void validate() const;
};

int sample_scale(const ScaleSampler& sampler, Rng& rng);

// Draws the route size r, then derives the capacity Q = ceil(r * mean demand).
// Resamples r in the (theoretically unreachable) case Q < max demand.
struct CapacityDraw {
  double route_size = 0.0;
  double capacity = 0.0;
};
CapacityDraw gen_capacity(const Eigen::VectorXd& demands,
                          const TriangularDist& dist, Rng& rng);

// Capacity for a fixed route size; exposed so tests can pin r.
double capacity_for_route_size(const Eigen::VectorXd& demands, double r);

Instance gen_instance(const GenConfig& config, ProblemKind kind, Rng& rng);

// Q divided by the mean customer demand: the expected number of customers
// served per route. CVRP only.
double expected_route_size(const Instance& inst);

// Training batch size schedule: max(1, round(bs_init * (100/N)^1.6)),
// round half up.
int batch_size_for(int scale, int bs_init);

}  // namespace enroute

#endif  // ENROUTE_INSTANCE_HPP_
