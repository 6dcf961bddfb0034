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

// Independent reference implementations used by tests only. These stay
// deliberately naive (enumeration, literal formula transcription) so the
// production code is checked against a different computation path.

#ifndef ENROUTE_TESTS_ORACLES_HPP_
#define ENROUTE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "enroute/instance.hpp"

namespace enroute::oracle {

// Exhaustive optimum over all cyclic TSP tours. Fixes node 0 first to factor
// out rotations; both directions are enumerated (harmless).
inline double brute_force_tsp(const Instance& inst) {
  const int n = inst.node_count();
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = inst.distance(0, perm.front());
    for (int i = 0; i + 1 < n - 1; ++i)
      len += inst.distance(perm[i], perm[i + 1]);
    len += inst.distance(perm.back(), 0);
    best = std::min(best, len);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Literal transcription of the top-xi weighting rule, computed by ranking
// every trajectory without sorting the reward array.
inline std::vector<double> rs_weights_reference(
    const std::vector<double>& rewards, int xi) {
  const int count = static_cast<int>(rewards.size());
  std::vector<int> rank(count, 0);  // 0 = best; ties broken by index
  for (int i = 0; i < count; ++i) {
    int r = 0;
    for (int j = 0; j < count; ++j) {
      if (rewards[j] > rewards[i]) ++r;
      else if (rewards[j] == rewards[i] && j < i) ++r;
    }
    rank[i] = r;
  }
  double baseline = 0.0;
  for (int i = 0; i < count; ++i)
    if (rank[i] == xi - 1) baseline = rewards[i];
  double a_max = 0.0;
  for (int i = 0; i < count; ++i)
    if (rank[i] < xi) a_max = std::max(a_max, rewards[i] - baseline);
  std::vector<double> weights(count, 0.0);
  if (a_max == 0.0) return weights;
  for (int i = 0; i < count; ++i)
    if (rank[i] < xi) weights[i] = (rewards[i] - baseline) / a_max;
  return weights;
}

// One-sided signed-rank p by enumerating every sign assignment ("spreadsheet"
// oracle). Zero differences dropped, midranks on tied magnitudes.
inline double wilcoxon_enumeration(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);
  const int n = static_cast<int>(diffs.size());
  if (n == 0) return 1.0;

  std::vector<double> mags(n);
  for (int i = 0; i < n; ++i) mags[i] = std::abs(diffs[i]);
  std::vector<double> ranks(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int less = 0, equal = 0;
    for (int j = 0; j < n; ++j) {
      if (mags[j] < mags[i]) ++less;
      if (mags[j] == mags[i]) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2.0;  // midrank
  }

  double observed = 0.0;
  for (int i = 0; i < n; ++i)
    if (diffs[i] > 0) observed += ranks[i];

  long long at_least = 0;
  const long long total = 1LL << n;
  for (long long mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1LL << i)) w += ranks[i];
    if (w >= observed) ++at_least;
  }
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace enroute::oracle

#endif  // ENROUTE_TESTS_ORACLES_HPP_
