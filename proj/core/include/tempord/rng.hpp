// Copyright 2026 The tempord Authors
//
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

#pragma once

// Random streams. Every stochastic routine takes an explicit engine; streams
// are derived from one master seed by labelled hashing so that, for example,
// sample path i depends only on (master seed, i) and never on scheduling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tempord {

/// SplitMix64: a counter-based generator (output = mix(seed + k * gamma)).
/// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  std::uint64_t state() const noexcept { return state_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for the stream named `label` with indices (a, b) under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = Rng::mix(master ^ Rng::mix(h));
  z = Rng::mix(z + 0x9e3779b97f4a7c15ULL * (a + 1));
  z = Rng::mix(z + 0xd1b54a32d192ed03ULL * (b + 1));
  return z;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound). bound must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection.
  __extension__ using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Rng& rng, double p) noexcept { return uniform01(rng) < p; }

/// Number of failures before the next success of a Bernoulli(p) sequence,
/// for 0 < p < 1.
inline std::uint64_t geometric_skip(Rng& rng, double log_one_minus_p) noexcept {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  const double k = std::floor(std::log(u) / log_one_minus_p);
  return k >= 9.0e18 ? std::numeric_limits<std::uint64_t>::max()
                     : static_cast<std::uint64_t>(k);
}

}  // namespace tempord
