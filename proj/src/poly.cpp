#include "gbcost/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "gbcost/errors.hpp"

namespace gbcost {

namespace {

void check_compatible(const Polynomial& p, const Polynomial& q) {
  if (p.nvars() != q.nvars())
    throw DimensionError("polynomials in " + std::to_string(p.nvars()) + " and " +
                         std::to_string(q.nvars()) + " variables");
  if (!(p.order() == q.order()))
    throw InvalidArgument("polynomials use different monomial orders: " + to_string(p.order()) +
                          " vs " + to_string(q.order()));
}

// out = a - c*m*b, where both a and b are strictly decreasing under ord.
// Terms of b are multiplied by m on the fly; zero results are dropped.
void merge_sub(std::span<const Term> a, Fp c, const Monomial* m, std::span<const Term> b,
               const MonomialOrder& ord, std::vector<Term>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  const Fp neg = -c;
  std::size_t i = 0, j = 0;
  Term tb;
  bool have_b = false;
  auto load_b = [&] {
    if (j < b.size()) {
      tb.mono = m ? b[j].mono * *m : b[j].mono;
      tb.coeff = neg * b[j].coeff;
      have_b = true;
    } else {
      have_b = false;
    }
  };
  load_b();
  while (i < a.size() && have_b) {
    auto cmp = order_cmp(a[i].mono, tb.mono, ord);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      out.push_back(tb);
      ++j;
      load_b();
    } else {
      Fp s = a[i].coeff + tb.coeff;
      if (!s.is_zero()) out.push_back({s, a[i].mono});
      ++i;
      ++j;
      load_b();
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (have_b) {
    out.push_back(tb);
    ++j;
    load_b();
  }
}

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char ch) {
    skip_ws();
    if (pos < s.size() && s[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_digit() {
    skip_ws();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  std::int64_t number() {
    skip_ws();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc{}) throw InvalidArgument("expected a number at offset " + std::to_string(pos));
    pos = static_cast<std::size_t>(ptr - s.data());
    return v;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
};

}  // namespace

Polynomial::Polynomial(std::size_t nvars, MonomialOrder order) : nvars_(nvars), order_(order) {
  if (nvars > kMaxVars) throw DimensionError("too many variables");
}

Polynomial::Polynomial(std::size_t nvars, MonomialOrder order, std::vector<Term> terms)
    : nvars_(nvars), order_(order) {
  if (nvars > kMaxVars) throw DimensionError("too many variables");
  for (const Term& t : terms)
    if (t.mono.nvars() != nvars) throw DimensionError("term has the wrong number of variables");
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return order_cmp(a.mono, b.mono, order) > 0;
  });
  for (const Term& t : terms) {
    if (!terms_.empty() && terms_.back().mono == t.mono) {
      terms_.back().coeff = terms_.back().coeff + t.coeff;
      if (terms_.back().coeff.is_zero()) terms_.pop_back();
    } else if (!t.coeff.is_zero()) {
      terms_.push_back(t);
    }
  }
}

Polynomial Polynomial::parse(std::string_view text, std::size_t nvars, MonomialOrder order) {
  Cursor cur{text};
  std::vector<Term> terms;
  if (cur.eat('0') && cur.done()) return Polynomial(nvars, order);
  cur.pos = 0;
  bool first = true;
  while (!cur.done()) {
    bool negative = false;
    if (cur.eat('+')) {
    } else if (cur.eat('-')) {
      negative = true;
    } else if (!first) {
      throw InvalidArgument("expected '+' or '-' in polynomial text");
    }
    first = false;
    std::int64_t c = 1;
    Monomial m(nvars);
    bool any = false;
    if (cur.peek_digit()) {
      c = cur.number();
      any = true;
      if (!cur.eat('*')) {
        terms.push_back({Fp(negative ? -c : c), m});
        continue;
      }
    }
    do {
      cur.skip_ws();
      if (!cur.eat('x')) {
        if (any) throw InvalidArgument("expected a variable x<i>");
        throw InvalidArgument("expected a term");
      }
      const std::int64_t idx = cur.number();
      if (idx < 1 || static_cast<std::size_t>(idx) > nvars)
        throw DimensionError("variable x" + std::to_string(idx) + " out of range");
      std::int64_t e = 1;
      if (cur.eat('^')) e = cur.number();
      m.set(static_cast<std::size_t>(idx - 1), m[static_cast<std::size_t>(idx - 1)] + static_cast<int>(e));
      any = true;
    } while (cur.eat('*'));
    terms.push_back({Fp(negative ? -c : c), m});
  }
  return Polynomial(nvars, order, std::move(terms));
}

void Polynomial::throw_zero_lead() {
  throw InvalidArgument("leading term of the zero polynomial");
}

int Polynomial::degree() const noexcept {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(lead_coeff().inverse());
}

Polynomial Polynomial::scaled(Fp c) const {
  if (c.is_zero()) return Polynomial(nvars_, order_);
  std::vector<Term> out(terms_);
  for (Term& t : out) t.coeff = t.coeff * c;
  return Polynomial(nvars_, order_, std::move(out), Sorted{});
}

Polynomial Polynomial::times(Fp c, const Monomial& m) const {
  if (m.nvars() != nvars_) throw DimensionError("multiplier has the wrong number of variables");
  if (c.is_zero()) return Polynomial(nvars_, order_);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back({t.coeff * c, t.mono * m});
  return Polynomial(nvars_, order_, std::move(out), Sorted{});
}

Polynomial Polynomial::with_order(const MonomialOrder& order) const {
  if (order == order_) return *this;
  return Polynomial(nvars_, order, terms_);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(terms_[i].coeff.value());
    if (nvars_ > 0) s += '*' + terms_[i].mono.to_string();
  }
  return s;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  check_compatible(p, q);
  std::vector<Term> out;
  merge_sub(p.terms_, -Fp(1), nullptr, q.terms_, p.order_, out);
  return Polynomial(p.nvars_, p.order_, std::move(out), Polynomial::Sorted{});
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) {
  check_compatible(p, q);
  std::vector<Term> out;
  merge_sub(p.terms_, Fp(1), nullptr, q.terms_, p.order_, out);
  return Polynomial(p.nvars_, p.order_, std::move(out), Polynomial::Sorted{});
}

Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }

Polynomial sub_term_multiple(const Polynomial& p, Fp c, const Monomial& m, const Polynomial& q) {
  check_compatible(p, q);
  std::vector<Term> out;
  merge_sub(p.terms_, c, &m, q.terms_, p.order_, out);
  return Polynomial(p.nvars_, p.order_, std::move(out), Polynomial::Sorted{});
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) throw InvalidArgument("S-polynomial of a zero polynomial");
  check_compatible(f, g);
  const Monomial l = lcm(f.lead_monomial(), g.lead_monomial());
  const Polynomial a = f.times(f.lead_coeff().inverse(), l / f.lead_monomial());
  return sub_term_multiple(a, g.lead_coeff().inverse(), l / g.lead_monomial(), g);
}

NormalForm normal_form(const Polynomial& f, std::span<const Polynomial> divisors,
                       std::vector<QuotientTerm>* trail) {
  const MonomialOrder& ord = f.order();

  std::vector<Term> rem;
  std::vector<Term> work(f.terms().begin(), f.terms().end());
  std::vector<Term> scratch;
  std::size_t head = 0;
  std::uint64_t steps = 0;

  while (head < work.size()) {
    const Term lt = work[head];
    std::size_t k = 0;
    while (k < divisors.size() && !divides(divisors[k].lead_monomial(), lt.mono)) ++k;
    if (k == divisors.size()) {
      rem.push_back(lt);
      ++head;
      continue;
    }
    const Polynomial& g = divisors[k];
    check_compatible(f, g);
    const Fp c = lt.coeff / g.lead_coeff();
    const Monomial m = lt.mono / g.lead_monomial();
    // The leading terms cancel exactly; merge only the tails.
    merge_sub(std::span<const Term>(work).subspan(head + 1), c, &m, g.terms().subspan(1), ord,
              scratch);
    std::swap(work, scratch);
    head = 0;
    ++steps;
    if (trail) trail->push_back({k, c, m});
  }
  return {Polynomial(f.nvars(), ord, std::move(rem), Polynomial::Sorted{}), steps};
}

}  // namespace gbcost
