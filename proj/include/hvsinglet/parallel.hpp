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

#ifndef HVSINGLET_PARALLEL_HPP_
#define HVSINGLET_PARALLEL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "hvsinglet/random.hpp"
#include "hvsinglet/stats.hpp"

namespace hvs {

/// Samples per independently seeded block.
inline constexpr std::uint64_t kBlockSize = 1u << 14;

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Mean and standard error of the K-vector `draw(rng)` over n draws.
///
/// Draws are split into blocks of kBlockSize; block k owns the stream
/// derive_seed(seed, k). Workers take blocks round-robin and the per-block
/// accumulators are merged in block order, so the result is bitwise
/// identical for any worker count. The first exception (in block order)
/// raised by `draw` is rethrown.
template <std::size_t K, class Draw>
std::array<Estimate, K> mc_mean(std::uint64_t n, std::uint64_t seed, unsigned workers, Draw&& draw) {
  if (n == 0) throw InvalidArgument("sample count must be at least 1");
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::array<Accumulator, K>> acc(blocks);
  std::vector<std::exception_ptr> errors(blocks);

  auto run_block = [&](std::uint64_t k) {
    try {
      Rng rng(derive_seed(seed, k));
      const std::uint64_t count = std::min(kBlockSize, n - k * kBlockSize);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::array<double, K> x = draw(rng);
        for (std::size_t j = 0; j < K; ++j) acc[k][j].add(x[j]);
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  const unsigned w = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, blocks));
  if (w == 1) {
    for (std::uint64_t k = 0; k < blocks; ++k) run_block(k);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t k = t; k < blocks; k += w) run_block(k);
      });
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::array<Accumulator, K> total;
  for (const auto& block : acc) {
    for (std::size_t j = 0; j < K; ++j) total[j].merge(block[j]);
  }
  std::array<Estimate, K> out;
  for (std::size_t j = 0; j < K; ++j) out[j] = total[j].estimate();
  return out;
}

}  // namespace hvs

#endif  // HVSINGLET_PARALLEL_HPP_
