#pragma once

#include <cstdint>
#include <ostream>

namespace gbcost {

/// Element of GF(32003), stored as its canonical representative in [0, p).
class Fp {
 public:
  static constexpr std::uint32_t kModulus = 32003;

  constexpr Fp() noexcept = default;
  constexpr explicit Fp(std::int64_t v) noexcept
      : v_(static_cast<std::uint32_t>(((v % kModulus) + kModulus) % kModulus)) {}

  constexpr std::uint32_t value() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  friend constexpr Fp operator+(Fp a, Fp b) noexcept {
    std::uint32_t s = a.v_ + b.v_;
    return raw(s >= kModulus ? s - kModulus : s);
  }
  friend constexpr Fp operator-(Fp a, Fp b) noexcept {
    return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kModulus - b.v_);
  }
  friend constexpr Fp operator-(Fp a) noexcept { return raw(a.v_ == 0 ? 0 : kModulus - a.v_); }
  friend constexpr Fp operator*(Fp a, Fp b) noexcept {
    return raw(static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v_) * b.v_ % kModulus));
  }
  friend constexpr bool operator==(Fp a, Fp b) noexcept = default;

  /// Multiplicative inverse via the extended Euclidean algorithm. Requires a nonzero value.
  Fp inverse() const;

  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }

  friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

 private:
  static constexpr Fp raw(std::uint32_t v) noexcept {
    Fp f;
    f.v_ = v;
    return f;
  }

  std::uint32_t v_ = 0;
};

}  // namespace gbcost
