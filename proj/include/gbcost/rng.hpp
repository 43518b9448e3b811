#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace gbcost {

/// SplitMix64 finalizer. Used for seeding and for mixing per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-sample seed derivation:
///   mix(base, id) = splitmix64(base ^ splitmix64(id + 0x9E3779B97F4A7C15))
/// This function is part of the dataset format; changing it changes every corpus.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t id) noexcept;

/// xoshiro256** generator, seeded by running SplitMix64 over the seed.
/// All library randomness goes through this class so results never depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Unbiased integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;

  /// Double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Double in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace gbcost
