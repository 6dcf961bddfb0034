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

#ifndef ENROUTE_RNG_HPP_
#define ENROUTE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace enroute {

// Deterministic random stream. All distributions are implemented on top of
// the raw 64-bit output so that a given seed yields the same values on every
// standard library / platform.
class Rng {
 public:
  Rng() : engine_(0x853c49e6748fea9bULL) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Triangular(min, mode, max) via inverse CDF.
  double triangular(double min, double mode, double max) {
    const double u = uniform01();
    const double cut = (mode - min) / (max - min);
    if (u < cut) return min + std::sqrt(u * (max - min) * (mode - min));
    return max - std::sqrt((1.0 - u) * (max - min) * (max - mode));
  }

  // Derives an independent child stream; mixing constant from splitmix64.
  Rng fork(std::uint64_t stream_id) {
    return Rng(next_u64() ^ (stream_id * 0x9e3779b97f4a7c15ULL + 1));
  }

  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void deserialize(const std::string& text) {
    std::istringstream is(text);
    is >> engine_;
  }

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace enroute

#endif  // ENROUTE_RNG_HPP_
