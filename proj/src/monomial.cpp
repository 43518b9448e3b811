#include "gbcost/monomial.hpp"

#include <algorithm>

#include "gbcost/errors.hpp"

namespace gbcost {

namespace {

void check_nvars(std::size_t n) {
  if (n > kMaxVars)
    throw DimensionError("monomial with " + std::to_string(n) + " variables exceeds the limit of " +
                         std::to_string(kMaxVars));
}

void check_same(const Monomial& a, const Monomial& b) {
  if (a.nvars() != b.nvars())
    throw DimensionError("monomials in " + std::to_string(a.nvars()) + " and " +
                         std::to_string(b.nvars()) + " variables");
}

// grevlex restricted to variables [lo, hi)
std::strong_ordering grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo,
                                   std::size_t hi) noexcept {
  int da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da <=> db;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return b[i] <=> a[i];
  }
  return std::strong_ordering::equal;
}

}  // namespace

Monomial::Monomial(std::size_t nvars) {
  check_nvars(nvars);
  n_ = static_cast<std::uint8_t>(nvars);
}

Monomial::Monomial(std::initializer_list<int> exps)
    : Monomial(std::span<const int>(exps.begin(), exps.size())) {}

Monomial::Monomial(std::span<const int> exps) {
  check_nvars(exps.size());
  n_ = static_cast<std::uint8_t>(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) set(i, exps[i]);
}

void Monomial::set(std::size_t i, int value) {
  if (value < 0) throw InvalidArgument("negative exponent");
  if (i >= n_) throw DimensionError("variable index out of range");
  deg_ += value - e_[i];
  e_[i] = value;
}

std::uint32_t Monomial::support() const noexcept {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < n_; ++i)
    if (e_[i] != 0) mask |= 1u << i;
  return mask;
}

bool Monomial::is_pure_power() const noexcept {
  const std::uint32_t s = support();
  return s != 0 && (s & (s - 1)) == 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  check_same(a, b);
  Monomial r = a;
  for (std::size_t i = 0; i < a.n_; ++i) r.e_[i] += b.e_[i];
  r.deg_ = a.deg_ + b.deg_;
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  check_same(a, b);
  Monomial r = a;
  for (std::size_t i = 0; i < a.n_; ++i) {
    if (b.e_[i] > a.e_[i]) throw InvalidArgument("monomial quotient is not exact");
    r.e_[i] -= b.e_[i];
  }
  r.deg_ = a.deg_ - b.deg_;
  return r;
}

std::string Monomial::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) s += '*';
    s += "x" + std::to_string(i + 1) + "^" + std::to_string(e_[i]);
  }
  return s;
}

void Monomial::throw_mismatch(const Monomial& a, const Monomial& b) {
  check_same(a, b);
  throw DimensionError("monomial mismatch");
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  check_same(a, b);
  Monomial r(a.nvars());
  for (std::size_t i = 0; i < a.nvars(); ++i) r.set(i, std::min(a[i], b[i]));
  return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
  check_same(a, b);
  return (a.support() & b.support()) == 0;
}

std::string to_string(const MonomialOrder& ord) {
  if (ord.kind == MonomialOrder::Kind::grevlex) return "grevlex";
  return "elimination(" + std::to_string(ord.block) + ")";
}

std::strong_ordering order_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
  check_same(a, b);
  const std::size_t n = a.nvars();
  if (ord.kind == MonomialOrder::Kind::grevlex) {
    if (a.degree() != b.degree()) return a.degree() <=> b.degree();
    for (std::size_t i = n; i-- > 0;) {
      if (a[i] != b[i]) return b[i] <=> a[i];
    }
    return std::strong_ordering::equal;
  }
  const std::size_t k = std::min(ord.block, n);
  if (auto c = grevlex_range(a, b, 0, k); c != 0) return c;
  return grevlex_range(a, b, k, n);
}

}  // namespace gbcost
