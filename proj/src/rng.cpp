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
#include "sqm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sqm {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t RngStream::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

long long RngStream::binomial(long long n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: bad arguments");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const double q = 1.0 - p;
  const long long mode = std::min(n, static_cast<long long>(std::floor((n + 1) * p)));
  const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                              mode * std::log(p) + (n - mode) * std::log(q);

  // Inversion over outcomes visited in order of decreasing probability,
  // starting at the mode; expected cost is O(sqrt(n p q)).
  double u = uniform();
  double pmf_mode = std::exp(log_pmf_mode);
  if (u < pmf_mode) return mode;
  u -= pmf_mode;

  long long lo = mode - 1;
  long long hi = mode + 1;
  double pmf_lo = lo >= 0 ? pmf_mode * (static_cast<double>(mode) / static_cast<double>(n - mode + 1)) * (q / p) : 0.0;
  double pmf_hi = hi <= n ? pmf_mode * (static_cast<double>(n - mode) / static_cast<double>(mode + 1)) * (p / q) : 0.0;
  while (lo >= 0 || hi <= n) {
    if (hi > n || (lo >= 0 && pmf_lo >= pmf_hi)) {
      if (u < pmf_lo) return lo;
      u -= pmf_lo;
      pmf_lo = lo > 0 ? pmf_lo * (static_cast<double>(lo) / static_cast<double>(n - lo + 1)) * (q / p) : 0.0;
      --lo;
    } else {
      if (u < pmf_hi) return hi;
      u -= pmf_hi;
      pmf_hi = hi < n ? pmf_hi * (static_cast<double>(n - hi) / static_cast<double>(hi + 1)) * (p / q) : 0.0;
      ++hi;
    }
    if (pmf_lo == 0.0 && pmf_hi == 0.0 && u > 0.0) break;
  }
  // Rounding left a sliver of mass unassigned; it belongs to the mode.
  return mode;
}

}  // namespace sqm
