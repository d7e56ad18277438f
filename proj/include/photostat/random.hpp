// Copyright 2026 The photostat Authors
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

// Reproducible random streams.
//
// Streams are std::mt19937_64 engines whose seeds are drawn from a SplitMix64
// sequence (Steele, Lea & Flood 2014) started at the user seed: stream k of
// seed s is always seeded with the k-th SplitMix64 output of s. Both
// generators are fully specified, and uniforms are built from the top 53 bits
// of an engine output, so results do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>

namespace photostat::random {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& engine) noexcept {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Binomial(trials, p) by counting Bernoulli successes. Exact, O(trials).
inline std::uint64_t binomial(std::mt19937_64& engine, std::uint64_t trials,
                              double p) noexcept {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) hits += uniform01(engine) < p;
  return hits;
}

}  // namespace photostat::random
