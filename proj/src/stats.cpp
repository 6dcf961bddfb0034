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

#include "enroute/stats.hpp"

#include <algorithm>
#include <cmath>

#include "enroute/error.hpp"

namespace enroute {

double gap(double cost, double ref) {
  if (ref <= 0.0) throw Error("gap: reference must be positive");
  return (cost - ref) / ref;
}

AggregateReport aggregate(const std::vector<BenchRecord>& records,
                          const std::vector<int>& boundaries) {
  if (records.empty()) throw Error("aggregate: no records");

  AggregateReport report;
  const std::size_t bucket_count = boundaries.size() + 1;
  std::vector<double> sums(bucket_count, 0.0);
  std::vector<int> counts(bucket_count, 0);

  double cost_sum = 0.0, ref_sum = 0.0, gap_sum = 0.0;
  for (const auto& rec : records) {
    std::size_t b = 0;
    while (b < boundaries.size() && rec.n > boundaries[b]) ++b;
    sums[b] += rec.gap;
    ++counts[b];
    gap_sum += rec.gap;
    cost_sum += rec.cost;
    ref_sum += rec.ref;
  }

  for (std::size_t b = 0; b < bucket_count; ++b) {
    std::string label;
    if (b == 0) {
      label = "N<=" + std::to_string(boundaries[0]);
    } else if (b < boundaries.size()) {
      label = std::to_string(boundaries[b - 1]) +
              "<N<=" + std::to_string(boundaries[b]);
    } else {
      label = "N>" + std::to_string(boundaries.back());
    }
    if (counts[b] == 0) {
      report.notices.push_back("bucket " + label + " is empty; omitted");
      continue;
    }
    report.buckets.push_back({label, counts[b], sums[b] / counts[b]});
  }

  report.total_count = static_cast<int>(records.size());
  report.total_mean_gap = gap_sum / records.size();
  report.mean_cost = cost_sum / records.size();
  report.mean_ref = ref_sum / records.size();
  if (report.mean_ref > 0.0)
    report.ratio_of_means_gap =
        (report.mean_cost - report.mean_ref) / report.mean_ref;
  return report;
}

namespace {

// P(Z >= z) for a standard normal.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_one_sided(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("wilcoxon: unequal sample sizes");
  if (a.empty()) throw Error("wilcoxon: empty samples");

  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }

  WilcoxonResult result;
  result.pairs_used = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    result.p_value = 1.0;
    result.warning = "all pairs tied; test is uninformative";
    return result;
  }

  const int n = static_cast<int>(diffs.size());

  // Midranks of |d|, doubled so that tied ranks stay integral.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return std::abs(diffs[x]) < std::abs(diffs[y]);
  });
  std::vector<long long> double_rank(n, 0);
  std::vector<double> tie_sizes;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n &&
           std::abs(diffs[order[j]]) == std::abs(diffs[order[i]]))
      ++j;
    // ranks i+1 .. j (1-based); midrank doubled = (i+1 + j)
    const long long doubled = (i + 1) + j;
    for (int k = i; k < j; ++k) double_rank[order[k]] = doubled;
    if (j - i > 1) tie_sizes.push_back(j - i);
    i = j;
  }

  long long w2 = 0;       // 2 * W+
  long long total2 = 0;   // 2 * sum of all ranks
  for (int k = 0; k < n; ++k) {
    total2 += double_rank[k];
    if (diffs[k] > 0) w2 += double_rank[k];
  }
  result.statistic = static_cast<double>(w2) / 2.0;

  if (n <= 25) {
    // Exact conditional null distribution given the observed |d| multiset:
    // each difference is independently positive or negative. Counts of
    // achievable doubled rank sums via subset-sum DP.
    std::vector<double> ways(total2 + 1, 0.0);
    ways[0] = 1.0;
    long long reach = 0;
    for (int k = 0; k < n; ++k) {
      const long long r = double_rank[k];
      for (long long s = reach; s >= 0; --s)
        if (ways[s] > 0) ways[s + r] += ways[s];
      reach += r;
    }
    double at_least = 0.0;
    for (long long s = w2; s <= total2; ++s) at_least += ways[s];
    result.p_value = at_least / std::ldexp(1.0, n);
    result.exact = true;
    return result;
  }

  // Normal approximation with tie correction and continuity correction.
  const double w = result.statistic;
  const double mean = n * (n + 1) / 4.0;
  double var = n * (n + 1) * (2.0 * n + 1) / 24.0;
  for (double t : tie_sizes) var -= (t * t * t - t) / 48.0;
  if (var <= 0.0) {
    result.p_value = 1.0;
    result.exact = false;
    result.warning = "degenerate variance after tie correction";
    return result;
  }
  const double z = (w - mean - 0.5) / std::sqrt(var);
  result.p_value = normal_sf(z);
  result.exact = false;
  return result;
}

}  // namespace enroute
