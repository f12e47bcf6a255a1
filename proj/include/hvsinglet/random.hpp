// Copyright 2026 The hvsinglet Authors
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

#ifndef HVSINGLET_RANDOM_HPP_
#define HVSINGLET_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace hvs {

/// SplitMix64 finalizer. Used only to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `stream` of master seed `master`.
///
/// Stream splitting: the pair (master, stream) is hashed by two chained
/// SplitMix64 rounds. Monte Carlo estimators draw samples in fixed-size
/// blocks and block k uses derive_seed(seed, k), so results depend only on
/// the master seed and never on how blocks are distributed over threads.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ (stream * 0xD1B54A32D192ED03ULL + 1));
}

/// Caller-owned random stream. Not thread safe; use one per worker.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Fair ±1.
  int sign() { return (engine_() >> 63) ? 1 : -1; }

  /// Fresh independent stream, seeded from this one.
  Rng split() { return Rng(splitmix64(engine_())); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hvs

#endif  // HVSINGLET_RANDOM_HPP_
