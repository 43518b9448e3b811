#include <gtest/gtest.h>

#include <compare>

#include "gbcost/errors.hpp"
#include "gbcost/field.hpp"
#include "gbcost/monomial.hpp"
#include "gbcost/poly.hpp"
#include "gbcost/rng.hpp"
#include "support.hpp"

using namespace gbcost;
using gbtest::P;

TEST(Field, InverseRoundTrip) {
  for (std::int64_t v = 1; v < 2000; ++v) {
    Fp a(v);
    EXPECT_EQ(a * a.inverse(), Fp(1)) << v;
  }
  EXPECT_EQ(Fp(-1).value(), Fp::kModulus - 1);
  EXPECT_THROW(Fp(0).inverse(), InvalidArgument);
}

TEST(Field, InverseMatchesFermat) {
  // a^(p-2) by square-and-multiply is an independent route to the inverse.
  auto pow = [](Fp a, std::uint32_t e) {
    Fp r(1);
    while (e) {
      if (e & 1) r = r * a;
      a = a * a;
      e >>= 1;
    }
    return r;
  };
  Rng rng(7);
  for (int k = 0; k < 500; ++k) {
    Fp a(static_cast<std::int64_t>(rng.between(1, Fp::kModulus - 1)));
    EXPECT_EQ(a.inverse(), pow(a, Fp::kModulus - 2));
  }
}

TEST(Order, GrevlexExamples) {
  const auto g = MonomialOrder::grevlex();
  EXPECT_EQ(order_cmp({2, 0, 0}, {1, 1, 0}, g), std::strong_ordering::greater);
  EXPECT_EQ(order_cmp({0, 2, 0}, {1, 0, 1}, g), std::strong_ordering::greater);
  EXPECT_EQ(order_cmp({1, 1, 1}, {1, 1, 1}, g), std::strong_ordering::equal);
  EXPECT_EQ(order_cmp({0, 0, 3}, {2, 0, 0}, g), std::strong_ordering::greater);
  EXPECT_EQ(order_cmp({1, 1, 0}, {0, 0, 2}, g), std::strong_ordering::greater);
}

TEST(Order, LengthMismatchThrows) {
  EXPECT_THROW(order_cmp({1, 0}, {1, 0, 0}, MonomialOrder::grevlex()), DimensionError);
  EXPECT_THROW((void)divides(Monomial{1, 0}, Monomial{1, 0, 0}), DimensionError);
}

TEST(Order, EliminationBlockFirst) {
  const auto e = MonomialOrder::elimination(1);
  // t beats any power of the other variables.
  EXPECT_EQ(order_cmp({1, 0, 0}, {0, 5, 5}, e), std::strong_ordering::greater);
  EXPECT_EQ(order_cmp({1, 0, 2}, {1, 1, 0}, e), std::strong_ordering::greater);
  EXPECT_EQ(order_cmp({0, 0, 2}, {0, 1, 0}, e), std::strong_ordering::greater);
}

TEST(Order, RandomLawsGrevlexAndElimination) {
  Rng rng(11);
  for (const MonomialOrder ord : {MonomialOrder::grevlex(), MonomialOrder::elimination(2)}) {
    for (int k = 0; k < 20000; ++k) {
      const Monomial a = gbtest::random_monomial(rng, 5, 6);
      const Monomial b = gbtest::random_monomial(rng, 5, 6);
      const Monomial c = gbtest::random_monomial(rng, 5, 6);
      const auto ab = order_cmp(a, b, ord);
      ASSERT_EQ(ab == 0, a == b);
      ASSERT_EQ(order_cmp(b, a, ord), 0 <=> ab);
      ASSERT_EQ(order_cmp(a * c, b * c, ord), ab);
      if (ab > 0 && order_cmp(b, c, ord) > 0) ASSERT_TRUE(order_cmp(a, c, ord) > 0);
      ASSERT_TRUE(order_cmp(a * c, a, ord) >= 0);
    }
  }
}

TEST(Monomial, DividesLcmGcd) {
  const Monomial a{2, 1, 0}, b{1, 3, 1};
  EXPECT_EQ(lcm(a, b), (Monomial{2, 3, 1}));
  EXPECT_EQ(gcd(a, b), (Monomial{1, 1, 0}));
  EXPECT_TRUE(divides(gcd(a, b), a));
  EXPECT_FALSE(divides(a, b));
  EXPECT_TRUE(coprime(Monomial{2, 0, 0}, Monomial{0, 2, 1}));
  EXPECT_TRUE((Monomial{0, 4, 0}).is_pure_power());
  EXPECT_FALSE((Monomial{1, 4, 0}).is_pure_power());
  EXPECT_FALSE((Monomial{0, 0, 0}).is_pure_power());
}

TEST(Poly, AddExamples) {
  EXPECT_EQ(P("x1^2 - x2") + P("x2 - x3"), P("x1^2 - x3"));
  EXPECT_EQ(P("x1 + x2") + Polynomial(3), P("x1 + x2"));
  EXPECT_EQ(P("x1 + x2") + P("x1 + x2"), P("2*x1 + 2*x2"));
  EXPECT_TRUE((P("x1*x2 - 7") - P("x1*x2 - 7")).is_zero());
}

TEST(Poly, ParseAndRender) {
  const Polynomial p = P("x3 - x1^2*x2 + 3");
  EXPECT_EQ(p.lead_monomial(), (Monomial{2, 1, 0}));
  EXPECT_EQ(p.lead_coeff(), Fp(-1));
  EXPECT_EQ(p.to_string(), "32002*x1^2*x2^1*x3^0+1*x1^0*x2^0*x3^1+3*x1^0*x2^0*x3^0");
  EXPECT_EQ(Polynomial(3).to_string(), "0");
  EXPECT_THROW(Polynomial(3).lead_term(), InvalidArgument);
}

TEST(Poly, SortedDistinctNonzeroInvariant) {
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const Polynomial p = gbtest::random_poly(rng, 4, 5, 8);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_FALSE(p.terms()[i].coeff.is_zero());
      if (i > 0) EXPECT_TRUE(order_cmp(p.terms()[i - 1].mono, p.terms()[i].mono, p.order()) > 0);
    }
  }
}

TEST(Poly, AdditionLaws) {
  Rng rng(5);
  for (int k = 0; k < 2000; ++k) {
    const Polynomial p = gbtest::random_poly(rng, 3, 4, 6);
    const Polynomial q = gbtest::random_poly(rng, 3, 4, 6);
    const Polynomial r = gbtest::random_poly(rng, 3, 4, 6);
    ASSERT_EQ(p + q, q + p);
    ASSERT_EQ((p + q) + r, p + (q + r));
    ASSERT_TRUE((p + p.scaled(Fp(-1))).is_zero());
  }
}

TEST(Poly, AdditionAgainstDenseOracle) {
  Rng rng(6);
  for (int k = 0; k < 500; ++k) {
    const Polynomial p = gbtest::random_poly(rng, 3, 4, 6);
    const Polynomial q = gbtest::random_poly(rng, 3, 4, 6);
    EXPECT_EQ(gbtest::dense(p + q), gbtest::dense_add(gbtest::dense(p), gbtest::dense(q)));
  }
}

TEST(Poly, SubTermMultipleMatchesComposition) {
  Rng rng(8);
  for (int k = 0; k < 500; ++k) {
    const Polynomial p = gbtest::random_poly(rng, 3, 4, 6);
    const Polynomial q = gbtest::random_poly(rng, 3, 4, 6);
    const Monomial m = gbtest::random_monomial(rng, 3, 3);
    const Fp c(static_cast<std::int64_t>(rng.between(1, 100)));
    EXPECT_EQ(sub_term_multiple(p, c, m, q), p - q.times(c, m));
  }
}

TEST(Poly, SPolynomialExamples) {
  EXPECT_EQ(s_polynomial(P("x1^2 - x2"), P("x1*x2 - x3")), P("x1*x3 - x2^2"));
  EXPECT_TRUE(s_polynomial(P("x1^2 - x2"), P("x1^2 - x2")).is_zero());
  EXPECT_TRUE(s_polynomial(P("x1^2"), P("x2^2")).is_zero());
  EXPECT_THROW(s_polynomial(Polynomial(3), P("x1")), InvalidArgument);
}

TEST(Poly, SPolynomialCancelsLeads) {
  Rng rng(9);
  for (int k = 0; k < 500; ++k) {
    const Polynomial f = gbtest::random_poly(rng, 3, 4, 4);
    const Polynomial g = gbtest::random_poly(rng, 3, 4, 4);
    if (f.is_zero() || g.is_zero()) continue;
    const Polynomial s = s_polynomial(f, g);
    if (!s.is_zero())
      EXPECT_TRUE(order_cmp(s.lead_monomial(), lcm(f.lead_monomial(), g.lead_monomial()), s.order()) < 0);
  }
}

TEST(NormalForm, Examples) {
  const std::vector<Polynomial> g2{P("x1^2 - x2"), P("x1*x2 - x3")};
  NormalForm nf = normal_form(P("x1*x3 - x2^2"), g2);
  EXPECT_EQ(nf.remainder, P("x1*x3 - x2^2"));
  EXPECT_EQ(nf.additions, 0u);

  nf = normal_form(g2[1], g2);
  EXPECT_TRUE(nf.remainder.is_zero());
  EXPECT_EQ(nf.additions, 1u);

  // x1^3*x3 - x2^3: subtract x1*x3*(x1^2 - x2) to get x1*x2*x3 - x2^3. Under
  // grevlex x2^3 > x1*x2*x3 (smaller x3 exponent), so the next step uses
  // x2^2 - x1*x3 and leaves 0. Two steps.
  const std::vector<Polynomial> g3{P("x1^2 - x2"), P("x1*x2 - x3"), P("x2^2 - x1*x3")};
  std::vector<QuotientTerm> trail;
  nf = normal_form(P("x1^3*x3 - x2^3"), g3, &trail);
  EXPECT_TRUE(nf.remainder.is_zero());
  EXPECT_EQ(nf.additions, 2u);
  ASSERT_EQ(trail.size(), 2u);
  EXPECT_EQ(trail[0].divisor, 0u);
  EXPECT_EQ(trail[1].divisor, 2u);
}

TEST(NormalForm, RandomReducedAndTrailReconstructs) {
  Rng rng(10);
  for (int k = 0; k < 400; ++k) {
    std::vector<Polynomial> g;
    const int s = static_cast<int>(rng.between(1, 4));
    while (static_cast<int>(g.size()) < s) {
      Polynomial p = gbtest::random_poly(rng, 3, 3, 3);
      if (!p.is_zero()) g.push_back(std::move(p));
    }
    const Polynomial f = gbtest::random_poly(rng, 3, 5, 6);
    std::vector<QuotientTerm> trail;
    const NormalForm nf = normal_form(f, g, &trail);
    EXPECT_EQ(nf.additions, trail.size());
    for (const Term& t : nf.remainder.terms())
      for (const Polynomial& d : g) ASSERT_FALSE(divides(d.lead_monomial(), t.mono));
    Polynomial sum(3);
    for (const QuotientTerm& q : trail) sum = sum + g[q.divisor].times(q.coeff, q.mono);
    EXPECT_EQ(sum, f - nf.remainder);
  }
}
