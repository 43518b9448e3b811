#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace gbcost {

/// Largest supported variable count. Eight ring variables plus one auxiliary
/// variable for saturation is the most the workbench needs.
inline constexpr std::size_t kMaxVars = 12;

/// Dense exponent vector of a monomial in `nvars()` variables, with a cached
/// total degree.
class Monomial {
 public:
  Monomial() noexcept = default;
  explicit Monomial(std::size_t nvars);
  Monomial(std::initializer_list<int> exps);
  explicit Monomial(std::span<const int> exps);

  std::size_t nvars() const noexcept { return n_; }
  int degree() const noexcept { return deg_; }
  int operator[](std::size_t i) const noexcept { return e_[i]; }
  void set(std::size_t i, int value);

  /// Bitmask of the variables with positive exponent.
  std::uint32_t support() const noexcept;
  /// True for x_i^k with k >= 1.
  bool is_pure_power() const noexcept;
  bool is_one() const noexcept { return deg_ == 0; }

  std::span<const std::int32_t> exponents() const noexcept { return {e_.data(), n_}; }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Exact quotient; requires divides(b, a).
  friend Monomial operator/(const Monomial& a, const Monomial& b);

  std::string to_string() const;

  /// True iff a divides b.
  friend bool divides(const Monomial& a, const Monomial& b) {
    if (a.n_ != b.n_) throw_mismatch(a, b);
    if (a.deg_ > b.deg_) return false;
    bool ok = true;
    for (std::size_t i = 0; i < kMaxVars; ++i) ok &= a.e_[i] <= b.e_[i];
    return ok;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    if (a.n_ != b.n_) throw_mismatch(a, b);
    Monomial r;
    r.n_ = a.n_;
    std::int32_t d = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      r.e_[i] = a.e_[i] > b.e_[i] ? a.e_[i] : b.e_[i];
      d += r.e_[i];
    }
    r.deg_ = d;
    return r;
  }

 private:
  [[noreturn]] static void throw_mismatch(const Monomial& a, const Monomial& b);

  std::array<std::int32_t, kMaxVars> e_{};
  std::uint8_t n_ = 0;
  std::int32_t deg_ = 0;
};

Monomial gcd(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);

/// A monomial order. `elimination(k)` compares the first k variables by
/// grevlex and breaks ties by grevlex on the remaining variables.
struct MonomialOrder {
  enum class Kind : std::uint8_t { grevlex, elimination };

  Kind kind = Kind::grevlex;
  std::size_t block = 0;

  static constexpr MonomialOrder grevlex() noexcept { return {}; }
  static constexpr MonomialOrder elimination(std::size_t k) noexcept {
    return {Kind::elimination, k};
  }

  friend constexpr bool operator==(const MonomialOrder&, const MonomialOrder&) noexcept = default;
};

std::string to_string(const MonomialOrder& ord);

/// Three-way comparison under `ord`. Throws DimensionError on a length mismatch.
std::strong_ordering order_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord);

}  // namespace gbcost
