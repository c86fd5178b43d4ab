// Copyright 2026 The sqm-variational Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sqm {

/// SplitMix64 finalizer; also used to expand seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t value);

/// Seed for run `index` of a batch started from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// xoshiro256** seeded through SplitMix64. Every sampler below is written
/// out here rather than taken from <random> so that sample sequences do not
/// depend on the standard library implementation.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Exact binomial draw by inversion from the mode.
  long long binomial(long long trials, double p);

  /// Independent child stream (does not advance this one).
  RngStream split(std::uint64_t index) const { return RngStream(derive_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace sqm
