// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace ontaug {

/// Seedable 64-bit generator with a fixed, documented output mapping.
///
/// The engine is std::mt19937_64, whose raw sequence is fixed by the
/// standard. All derived draws (uniform reals, bounded integers, normals,
/// shuffles) are computed here rather than through <random> distributions,
/// whose outputs differ between standard library implementations. This keeps
/// runs replayable across toolchains. The identifier below is written to
/// every manifest.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/u53/splitmix64-split";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [0, bound) by rejection; bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Standard normal via Box-Muller (one value per call, second discarded).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Child generator whose stream is independent of further draws here.
  Rng split();

  /// Fisher-Yates, walking from the back.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ontaug
