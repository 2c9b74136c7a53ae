// Copyright 2026 The pnsim Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pnsim {

// Counter-based generator: every draw is a pure hash of (seed, stream,
// counter), so any draw can be recomputed out of order. This is what keeps
// Monte Carlo trials and per-slot detector noise independent of scheduling.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t hash(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t counter) noexcept {
    std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ULL);
    k = mix(k ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    return mix(k ^ (counter * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  /// Uniform in the open interval (0, 1).
  static double uniform_at(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) noexcept {
    return (static_cast<double>(hash(seed, stream, counter) >> 11) + 0.5) *
           0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counters 2i and 2i+1.
  static double normal_at(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) noexcept {
    const double u1 = uniform_at(seed, stream, 2 * index);
    const double u2 = uniform_at(seed, stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next_u64() noexcept { return hash(seed_, stream_, counter_++); }
  double uniform() noexcept { return uniform_at(seed_, stream_, counter_++); }
  double normal() noexcept { return normal_at(seed_, stream_, counter_++); }

  /// Independent generator for a sub-task, e.g. one Monte Carlo trial.
  [[nodiscard]] CounterRng split(std::uint64_t id) const noexcept {
    return CounterRng(hash(seed_, stream_, ~id), id);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Seed for the `index`-th derived task of `base_seed`.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed,
                                    std::uint64_t index) noexcept {
  return CounterRng::hash(base_seed, 0x5eedULL, index);
}

}  // namespace pnsim
