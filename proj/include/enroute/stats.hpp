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

#ifndef ENROUTE_STATS_HPP_
#define ENROUTE_STATS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace enroute {

struct BenchRecord {
  std::string instance;
  int n = 0;  // customer count
  std::string method;
  double cost = 0.0;
  double ref = 0.0;  // BKS or OPT
  double gap = 0.0;
  double time_s = 0.0;
};

// (cost - ref) / ref. ref must be positive.
double gap(double cost, double ref);

struct BucketSummary {
  std::string label;
  int count = 0;
  double mean_gap = 0.0;
};

struct AggregateReport {
  std::vector<BucketSummary> buckets;
  int total_count = 0;
  double total_mean_gap = 0.0;  // mean of per-instance gaps
  // Ratio-of-means variant: (mean cost - mean ref) / mean ref.
  double mean_cost = 0.0;
  double mean_ref = 0.0;
  double ratio_of_means_gap = 0.0;
  std::vector<std::string> notices;  // e.g. omitted empty buckets
};

AggregateReport aggregate(const std::vector<BenchRecord>& records,
                          const std::vector<int>& boundaries = {200, 500,
                                                                1000});

struct WilcoxonResult {
  double p_value = 1.0;
  double statistic = 0.0;  // rank sum of positive differences (W+)
  int pairs_used = 0;      // after dropping zero differences
  bool exact = true;
  std::optional<std::string> warning;
};

// One-sided signed-rank test of H0 "A has no larger values than B" against
// H1 "A tends to be larger". Zero differences are dropped; tied magnitudes
// get midranks. Exact conditional distribution up to 25 pairs, normal
// approximation with tie correction and continuity correction beyond.
WilcoxonResult wilcoxon_one_sided(const std::vector<double>& a,
                                  const std::vector<double>& b);

}  // namespace enroute

#endif  // ENROUTE_STATS_HPP_
