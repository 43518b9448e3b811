#pragma once

// Shared helpers for the unit suites: random inputs and a dense oracle.
#include <map>
#include <string>
#include <vector>

#include "gbcost/poly.hpp"
#include "gbcost/rng.hpp"

namespace gbtest {

inline gbcost::Polynomial P(const std::string& text, std::size_t nvars = 3,
                            gbcost::MonomialOrder ord = gbcost::MonomialOrder::grevlex()) {
  return gbcost::Polynomial::parse(text, nvars, ord);
}

inline gbcost::Monomial random_monomial(gbcost::Rng& rng, std::size_t nvars, int max_exp) {
  std::vector<int> e(nvars);
  for (int& x : e) x = static_cast<int>(rng.between(0, max_exp));
  return gbcost::Monomial(std::span<const int>(e));
}

inline gbcost::Polynomial random_poly(gbcost::Rng& rng, std::size_t nvars, int max_exp, int max_terms,
                                      gbcost::MonomialOrder ord = gbcost::MonomialOrder::grevlex()) {
  std::vector<gbcost::Term> terms;
  const int k = static_cast<int>(rng.between(0, max_terms));
  for (int i = 0; i < k; ++i)
    terms.push_back({gbcost::Fp(static_cast<std::int64_t>(rng.between(1, gbcost::Fp::kModulus - 1))),
                     random_monomial(rng, nvars, max_exp)});
  return gbcost::Polynomial(nvars, ord, std::move(terms));
}

// Exponent vector -> coefficient, zeros removed. Independent of any order.
using Dense = std::map<std::vector<int>, std::uint32_t>;

inline Dense dense(const gbcost::Polynomial& p) {
  Dense d;
  for (const gbcost::Term& t : p.terms()) {
    std::vector<int> e(t.mono.exponents().begin(), t.mono.exponents().end());
    d[e] = t.coeff.value();
  }
  return d;
}

inline Dense dense_add(Dense a, const Dense& b) {
  for (const auto& [e, c] : b) {
    const std::uint32_t s = (a[e] + c) % gbcost::Fp::kModulus;
    if (s == 0)
      a.erase(e);
    else
      a[e] = s;
  }
  return a;
}

}  // namespace gbtest
