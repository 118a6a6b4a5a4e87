// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace ckgru {

/// PCG32 (XSH-RR, 64-bit state) with the reference multiplier and default
/// stream. Identical sequences on every platform for a given seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0x14057b7ef767814fULL);

  std::uint32_t next_u32();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound), unbiased.
  std::uint32_t below(std::uint32_t bound);
  /// Standard normal via Box-Muller (no cached second value).
  double normal();

  template <typename T> void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t state() const { return state_; }
  std::uint64_t increment() const { return inc_; }

private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  std::uint64_t seed_ = 0;
};

} // namespace ckgru
