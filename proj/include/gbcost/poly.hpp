#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbcost/field.hpp"
#include "gbcost/monomial.hpp"

namespace gbcost {

struct NormalForm;
struct QuotientTerm;

struct Term {
  Fp coeff;
  Monomial mono;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial over GF(32003). Terms are kept strictly decreasing under
/// the polynomial's monomial order, with no zero coefficients and no repeated
/// monomials. Values are immutable once built.
class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars, MonomialOrder order = MonomialOrder::grevlex());
  /// Builds from arbitrary terms: sorts, merges repeated monomials, drops zeros.
  Polynomial(std::size_t nvars, MonomialOrder order, std::vector<Term> terms);

  /// Parses "3*x1^2*x2 + 32002*x3 - 5" style text. Coefficients are reduced mod p.
  static Polynomial parse(std::string_view text, std::size_t nvars,
                          MonomialOrder order = MonomialOrder::grevlex());

  std::size_t nvars() const noexcept { return nvars_; }
  const MonomialOrder& order() const noexcept { return order_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::span<const Term> terms() const noexcept { return terms_; }

  const Term& lead_term() const {
    if (terms_.empty()) throw_zero_lead();
    return terms_.front();
  }
  const Monomial& lead_monomial() const { return lead_term().mono; }
  Fp lead_coeff() const { return lead_term().coeff; }

  /// Maximum total degree of a term; -1 for the zero polynomial.
  int degree() const noexcept;

  Polynomial monic() const;
  Polynomial scaled(Fp c) const;
  /// Multiplies by the term c*m.
  Polynomial times(Fp c, const Monomial& m) const;
  /// Same polynomial, re-sorted under another order.
  Polynomial with_order(const MonomialOrder& order) const;

  /// Terms joined by "+", each rendered "c*x1^a1*...*xn^an"; "0" for zero.
  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p) { return p.scaled(-Fp(1)); }
  friend bool operator==(const Polynomial& p, const Polynomial& q) = default;

 private:
  [[noreturn]] static void throw_zero_lead();
  friend Polynomial sub_term_multiple(const Polynomial&, Fp, const Monomial&, const Polynomial&);
  friend NormalForm normal_form(const Polynomial&, std::span<const Polynomial>,
                                std::vector<QuotientTerm>*);
  struct Sorted {};
  Polynomial(std::size_t nvars, MonomialOrder order, std::vector<Term> terms, Sorted) noexcept
      : nvars_(nvars), order_(order), terms_(std::move(terms)) {}

  std::size_t nvars_;
  MonomialOrder order_;
  std::vector<Term> terms_;
};

/// p + q. Both operands must share the variable count and order.
Polynomial poly_add(const Polynomial& p, const Polynomial& q);

/// p - c*m*q computed in one merge pass.
Polynomial sub_term_multiple(const Polynomial& p, Fp c, const Monomial& m, const Polynomial& q);

/// (lcm/LT(f))*f - (lcm/LT(g))*g with lcm of the two leading monomials.
Polynomial s_polynomial(const Polynomial& f, const Polynomial& g);

/// One reduction step recorded by normal_form: the working polynomial had
/// coeff*mono*divisors[divisor] subtracted from it.
struct QuotientTerm {
  std::size_t divisor;
  Fp coeff;
  Monomial mono;
};

struct NormalForm {
  Polynomial remainder;
  std::uint64_t additions = 0;
};

/// Full reduction of f by `divisors`: every term of the remainder is
/// irreducible. The divisor with the earliest index whose leading monomial
/// divides the current term is used. `additions` counts elementary reduction
/// steps. When `trail` is given each step is appended to it.
NormalForm normal_form(const Polynomial& f, std::span<const Polynomial> divisors,
                       std::vector<QuotientTerm>* trail = nullptr);

}  // namespace gbcost
