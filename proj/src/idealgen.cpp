#include "gbcost/idealgen.hpp"

#include <algorithm>
#include <regex>

#include "gbcost/buchberger.hpp"
#include "gbcost/errors.hpp"
#include "gbcost/rng.hpp"

namespace gbcost {

namespace {

void enumerate_exponents(int n, int remaining, std::vector<int>& current, std::size_t pos,
                         std::vector<Monomial>& out) {
  if (pos + 1 == static_cast<std::size_t>(n)) {
    current[pos] = remaining;
    out.emplace_back(std::span<const int>(current));
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate_exponents(n, remaining - e, current, pos + 1, out);
  }
}

void enumerate_columns(int D, int remaining, IntVector& current, std::size_t pos,
                       std::vector<IntVector>& out) {
  if (pos == static_cast<std::size_t>(D)) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[pos] = e;
    enumerate_columns(D, remaining - e, current, pos + 1, out);
  }
}

}  // namespace

std::string dist_name(const DistSpec& spec) {
  if (const auto* b = std::get_if<BinomialDistSpec>(&spec)) {
    return std::to_string(b->n) + "-" + std::to_string(b->d) + "-" + std::to_string(b->s) + "-" +
           (b->mode == BinomialMode::uniform ? "uniform" : "weighted");
  }
  const auto& t = std::get<ToricDistSpec>(spec);
  return "T(" + std::to_string(t.D) + "," + std::to_string(t.L) + "," + std::to_string(t.U) + "," +
         std::to_string(t.n) + ")";
}

DistSpec parse_dist_name(const std::string& name) {
  static const std::regex binomial(R"(^\s*(\d+)-(\d+)-(\d+)-(uniform|weighted)\s*$)");
  static const std::regex toric(R"(^\s*T\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  DistSpec spec;
  if (std::regex_match(name, m, binomial)) {
    spec = BinomialDistSpec{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]),
                            m[4] == "uniform" ? BinomialMode::uniform : BinomialMode::weighted};
  } else if (std::regex_match(name, m, toric)) {
    spec = ToricDistSpec{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4])};
  } else {
    throw ConfigError("unrecognized distribution '" + name + "'");
  }
  validate(spec);
  return spec;
}

void validate(const DistSpec& spec) {
  if (const auto* b = std::get_if<BinomialDistSpec>(&spec)) {
    if (b->n < 1 || b->d < 1 || b->s < 1) throw ConfigError("binomial spec needs n, d, s >= 1");
    if (static_cast<std::size_t>(b->n) > 8) throw ConfigError("binomial spec supports n <= 8");
    if (b->n == 1 && b->d == 1) throw ConfigError("n=1, d=1 has a single monomial; no binomials exist");
    return;
  }
  const auto& t = std::get<ToricDistSpec>(spec);
  if (t.D < 1 || t.U < 1 || t.L < 0 || t.n < 1) throw ConfigError("toric spec needs D, U, n >= 1 and L >= 0");
  if (static_cast<std::size_t>(t.n) + 1 > kMaxVars) throw ConfigError("toric spec supports n <= 11");
}

int ring_vars(const DistSpec& spec) {
  if (const auto* b = std::get_if<BinomialDistSpec>(&spec)) return b->n;
  return std::get<ToricDistSpec>(spec).n;
}

std::uint64_t monomial_pool_size(int n, int d) {
  // C(n+d, n) - 1, computed incrementally to stay exact.
  std::uint64_t c = 1;
  for (int i = 1; i <= n; ++i) c = c * static_cast<std::uint64_t>(d + i) / static_cast<std::uint64_t>(i);
  return c - 1;
}

std::vector<Monomial> monomials_of_degree(int n, int degree) {
  std::vector<Monomial> out;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  enumerate_exponents(n, degree, current, 0, out);
  return out;
}

BinomialSampler::BinomialSampler(const BinomialDistSpec& spec) : spec_(spec) {
  validate(DistSpec{spec});
  by_degree_.resize(static_cast<std::size_t>(spec.d) + 1);
  for (int deg = 1; deg <= spec.d; ++deg) {
    by_degree_[static_cast<std::size_t>(deg)] = monomials_of_degree(spec.n, deg);
    total_ += by_degree_[static_cast<std::size_t>(deg)].size();
  }
}

std::vector<Polynomial> BinomialSampler::sample(std::uint64_t seed) const {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(spec_.n);
  auto draw = [&]() -> const Monomial& {
    if (spec_.mode == BinomialMode::weighted) {
      const auto deg = static_cast<std::size_t>(rng.between(1, spec_.d));
      const auto& pool = by_degree_[deg];
      return pool[rng.below(pool.size())];
    }
    std::uint64_t idx = rng.below(total_);
    for (std::size_t deg = 1;; ++deg) {
      if (idx < by_degree_[deg].size()) return by_degree_[deg][idx];
      idx -= by_degree_[deg].size();
    }
  };
  std::vector<Polynomial> gens;
  gens.reserve(static_cast<std::size_t>(spec_.s));
  for (int k = 0; k < spec_.s; ++k) {
    const Monomial* m1 = nullptr;
    const Monomial* m2 = nullptr;
    do {
      m1 = &draw();
      m2 = &draw();
    } while (*m1 == *m2);
    const Fp c1(rng.between(1, Fp::kModulus - 1));
    const Fp c2(rng.between(1, Fp::kModulus - 1));
    gens.emplace_back(n, MonomialOrder::grevlex(), std::vector<Term>{{c1, *m1}, {-c2, *m2}});
  }
  return gens;
}

std::vector<Polynomial> sample_binomial_system(const BinomialDistSpec& spec, std::uint64_t seed) {
  return BinomialSampler(spec).sample(seed);
}

std::vector<IntVector> admissible_columns(int D, int U) {
  std::vector<IntVector> out;
  IntVector current(static_cast<std::size_t>(D), 0);
  enumerate_columns(D, U, current, 0, out);
  std::erase_if(out, [](const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
  });
  std::sort(out.begin(), out.end());
  return out;
}

ToricSampler::ToricSampler(const ToricDistSpec& spec) : spec_(spec) {
  validate(DistSpec{spec});
  if (spec.L != 0) throw UnsupportedParameter("toric sampling supports L = 0 only");
  columns_ = admissible_columns(spec.D, spec.U);
}

ToricMatrix ToricSampler::sample(std::uint64_t seed) const {
  Rng rng(seed);
  ToricMatrix a{IntMatrix(static_cast<std::size_t>(spec_.D), static_cast<std::size_t>(spec_.n)), {}};
  for (std::size_t c = 0; c < static_cast<std::size_t>(spec_.n); ++c) {
    const IntVector& col = columns_[rng.below(columns_.size())];
    for (std::size_t r = 0; r < col.size(); ++r) a.entries(r, c) = col[r];
  }
  return a;
}

ToricMatrix sample_toric_matrix(const ToricDistSpec& spec, std::uint64_t seed) {
  return ToricSampler(spec).sample(seed);
}

std::vector<Polynomial> toric_ideal(ToricMatrix& a, std::uint64_t pair_budget) {
  const std::size_t n = a.entries.cols();
  if (n + 1 > kMaxVars) throw DimensionError("toric matrix has too many columns");
  if (a.kernel_basis.empty()) a.kernel_basis = lattice_kernel(a.entries);
  if (a.kernel_basis.empty()) return {};

  // Variable 0 is the auxiliary t; x_i is variable i.
  const std::size_t nv = n + 1;
  const MonomialOrder elim = MonomialOrder::elimination(1);
  std::vector<Polynomial> gens;
  for (const IntVector& v : a.kernel_basis) {
    Monomial pos(nv), neg(nv);
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] > 0) pos.set(i + 1, static_cast<int>(v[i]));
      if (v[i] < 0) neg.set(i + 1, static_cast<int>(-v[i]));
    }
    gens.emplace_back(nv, elim, std::vector<Term>{{Fp(1), pos}, {Fp(-1), neg}});
  }
  Monomial all(nv);
  for (std::size_t i = 0; i < nv; ++i) all.set(i, 1);
  gens.emplace_back(nv, elim, std::vector<Term>{{Fp(1), all}, {Fp(-1), Monomial(nv)}});

  BuchbergerOptions opts;
  opts.strategy = Strategy::degree;
  opts.prune_redundant = true;
  opts.pair_budget = pair_budget;
  const GroebnerResult gb = run(gens, opts, elim);

  std::vector<Polynomial> out;
  for (const Polynomial& g : gb.basis) {
    const bool has_t = std::any_of(g.terms().begin(), g.terms().end(),
                                   [](const Term& t) { return t.mono[0] != 0; });
    if (has_t) continue;
    std::vector<Term> terms;
    for (const Term& t : g.terms()) {
      Monomial m(n);
      for (std::size_t i = 0; i < n; ++i) m.set(i, t.mono[i + 1]);
      terms.push_back({t.coeff, m});
    }
    out.push_back(Polynomial(n, MonomialOrder::grevlex(), std::move(terms)).monic());
  }
  std::sort(out.begin(), out.end(), [](const Polynomial& f, const Polynomial& g) {
    return order_cmp(f.lead_monomial(), g.lead_monomial(), f.order()) < 0;
  });
  return out;
}

bool satisfies_toric_membership(const IntMatrix& a, const Polynomial& generator) {
  if (generator.size() != 2 || generator.nvars() != a.cols()) return false;
  if (!(generator.terms()[0].coeff + generator.terms()[1].coeff).is_zero()) return false;
  IntVector u(a.cols()), v(a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    u[i] = generator.terms()[0].mono[i];
    v[i] = generator.terms()[1].mono[i];
  }
  return a.times(u) == a.times(v);
}

}  // namespace gbcost
