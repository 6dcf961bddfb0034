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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enroute/error.hpp"
#include "enroute/rng.hpp"
#include "enroute/stats.hpp"
#include "oracles.hpp"

using namespace enroute;

TEST_CASE("gap is the relative cost excess") {
  CHECK(gap(110.0, 100.0) == doctest::Approx(0.10));
  CHECK(gap(100.0, 100.0) == 0.0);
  CHECK_THROWS_AS(gap(10.0, 0.0), Error);
  CHECK_THROWS_AS(gap(10.0, -3.0), Error);
}

TEST_CASE("mean gap over records matches an independent sum") {
  Rng rng(5);
  std::vector<BenchRecord> records;
  double alt_numerator = 0.0;
  for (int i = 0; i < 57; ++i) {
    BenchRecord rec;
    rec.instance = "r" + std::to_string(i);
    rec.n = static_cast<int>(rng.uniform_int(10, 1500));
    rec.ref = rng.uniform(100.0, 1000.0);
    rec.cost = rec.ref * rng.uniform(1.0, 1.4);
    rec.gap = gap(rec.cost, rec.ref);
    alt_numerator += rec.cost / rec.ref - 1.0;  // algebraically identical
    records.push_back(rec);
  }
  const auto report = aggregate(records);
  CHECK(report.total_mean_gap ==
        doctest::Approx(alt_numerator / records.size()).epsilon(1e-12));
}

TEST_CASE("aggregate buckets") {
  BenchRecord a{"a", 150, "m", 105, 100, 0.05, 0};
  const auto single = aggregate({a});
  REQUIRE(single.buckets.size() == 1);
  CHECK(single.buckets[0].label == "N<=200");
  CHECK(single.buckets[0].mean_gap == doctest::Approx(0.05));
  CHECK(single.total_mean_gap == doctest::Approx(0.05));
  CHECK_FALSE(single.notices.empty());  // other buckets reported empty

  BenchRecord b{"b", 700, "m", 120, 100, 0.20, 0};
  const auto both = aggregate({a, b});
  REQUIRE(both.buckets.size() == 2);
  CHECK(both.buckets[1].label == "500<N<=1000");
  CHECK(both.total_mean_gap == doctest::Approx((0.05 + 0.20) / 2));
}

TEST_CASE("aggregate replays a spreadsheet computation") {
  // Independent oracle: bucket sums tallied by hand-rolled loops over a
  // separately stored table.
  struct Row {
    int n;
    double gap_value;
  };
  std::vector<Row> table = {{100, 0.01}, {150, 0.03}, {300, 0.05},
                            {450, 0.02}, {800, 0.10}, {950, 0.08},
                            {1200, 0.30}};
  std::vector<BenchRecord> records;
  for (std::size_t i = 0; i < table.size(); ++i) {
    BenchRecord rec;
    rec.instance = "x" + std::to_string(i);
    rec.n = table[i].n;
    rec.ref = 100;
    rec.cost = 100 * (1 + table[i].gap_value);
    rec.gap = table[i].gap_value;
    records.push_back(rec);
  }
  const auto report = aggregate(records);
  REQUIRE(report.buckets.size() == 4);
  CHECK(report.buckets[0].mean_gap == doctest::Approx((0.01 + 0.03) / 2));
  CHECK(report.buckets[1].mean_gap == doctest::Approx((0.05 + 0.02) / 2));
  CHECK(report.buckets[2].mean_gap == doctest::Approx((0.10 + 0.08) / 2));
  CHECK(report.buckets[3].mean_gap == doctest::Approx(0.30));
  double total = 0;
  for (const auto& row : table) total += row.gap_value;
  CHECK(report.total_mean_gap == doctest::Approx(total / table.size()));
}

TEST_CASE("ratio-of-means gap for cost-style benchmarks") {
  BenchRecord a{"a", 10, "m", 110, 100, 0.10, 0};
  BenchRecord b{"b", 10, "m", 330, 300, 0.10, 0};
  const auto report = aggregate({a, b});
  CHECK(report.mean_cost == doctest::Approx(220.0));
  CHECK(report.mean_ref == doctest::Approx(200.0));
  CHECK(report.ratio_of_means_gap == doctest::Approx(0.10));
}

TEST_CASE("wilcoxon: uniformly larger sample is significant") {
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) {
    b.push_back(i);
    a.push_back(i + 1 + 0.1 * i);
  }
  const auto result = wilcoxon_one_sided(a, b);
  CHECK(result.p_value < 0.01);
  CHECK(result.exact);
  CHECK(result.pairs_used == 10);
}

TEST_CASE("wilcoxon: identical samples are uninformative") {
  std::vector<double> a = {1, 2, 3}, b = {1, 2, 3};
  const auto result = wilcoxon_one_sided(a, b);
  CHECK(result.p_value == 1.0);
  CHECK(result.warning.has_value());
}

TEST_CASE("wilcoxon matches exhaustive sign enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 8));
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      // Small integer grid provokes ties and zero differences.
      a[i] = static_cast<double>(rng.uniform_int(0, 4));
      b[i] = static_cast<double>(rng.uniform_int(0, 4));
    }
    const auto result = wilcoxon_one_sided(a, b);
    const double reference = oracle::wilcoxon_enumeration(a, b);
    CHECK(std::abs(result.p_value - reference) < 1e-12);
  }
}

TEST_CASE("wilcoxon normal approximation is sane for large n") {
  Rng rng(47);
  std::vector<double> a(60), b(60);
  for (int i = 0; i < 60; ++i) {
    b[i] = rng.uniform(0.0, 1.0);
    a[i] = b[i] + rng.uniform(-0.1, 0.3);
  }
  const auto result = wilcoxon_one_sided(a, b);
  CHECK_FALSE(result.exact);
  CHECK(result.p_value > 0.0);
  CHECK(result.p_value < 1.0);
  // Shifting a up can only make the one-sided p smaller.
  std::vector<double> shifted = a;
  for (auto& v : shifted) v += 0.5;
  CHECK(wilcoxon_one_sided(shifted, b).p_value <= result.p_value);
}
