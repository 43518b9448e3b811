#include "gbcost/buchberger.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "gbcost/errors.hpp"

namespace gbcost {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::first:
      return "first";
    case Strategy::degree:
      return "degree";
    case Strategy::normal:
      return "normal";
    case Strategy::sugar:
      return "sugar";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Strategy s : kAllStrategies)
    if (lower == to_string(s)) return s;
  return std::nullopt;
}

SPair select_pair(std::vector<SPair>& queue, Strategy strategy, const MonomialOrder& order) {
  if (queue.empty()) throw InvalidArgument("select_pair on an empty queue");
  auto normal_less = [&](const SPair& a, const SPair& b) {
    auto c = order_cmp(a.lcm, b.lcm, order);
    if (c != 0) return c < 0;
    return a.seq < b.seq;
  };
  auto less = [&](const SPair& a, const SPair& b) {
    switch (strategy) {
      case Strategy::first:
        return a.seq < b.seq;
      case Strategy::degree:
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.seq < b.seq;
      case Strategy::normal:
        return normal_less(a, b);
      case Strategy::sugar:
        if (a.sugar != b.sugar) return a.sugar < b.sugar;
        return normal_less(a, b);
    }
    return false;
  };
  // Ties are broken by seq, so the queue's storage order is irrelevant and
  // the chosen slot can be filled from the back.
  auto it = std::min_element(queue.begin(), queue.end(), less);
  SPair chosen = std::move(*it);
  if (it != queue.end() - 1) *it = std::move(queue.back());
  queue.pop_back();
  return chosen;
}

void update_pairs(PairState& state, Polynomial poly, int sugar, bool elimination, bool prune) {
  if (poly.is_zero()) throw InvalidArgument("cannot add the zero polynomial to a basis");
  const std::size_t m = state.basis.size();
  const Monomial& lf = poly.lead_monomial();

  auto make_pair = [&](std::size_t i) {
    const Monomial& li = state.basis[i].lead_monomial();
    SPair p;
    p.i = i;
    p.j = m;
    p.lcm = lcm(li, lf);
    p.degree = p.lcm.degree();
    p.sugar = std::max(state.sugar[i] + p.degree - li.degree(), sugar + p.degree - lf.degree());
    return p;
  };

  state.active.resize(m, true);
  auto live = [&](std::size_t i) { return !prune || state.active[i]; };

  std::vector<SPair> fresh;
  if (!elimination) {
    for (std::size_t i = 0; i < m; ++i)
      if (live(i)) fresh.push_back(make_pair(i));
  } else {
    // B criterion on pending pairs.
    std::erase_if(state.queue, [&](const SPair& p) {
      if (!divides(lf, p.lcm)) return false;
      return p.lcm != lcm(state.basis[p.i].lead_monomial(), lf) &&
             p.lcm != lcm(state.basis[p.j].lead_monomial(), lf);
    });

    // M and F criteria: among new pairs keep one per minimal lcm; drop a whole
    // lcm class when any of its pairs has coprime leading monomials.
    std::vector<SPair> candidates;
    candidates.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
      if (live(i)) candidates.push_back(make_pair(i));
    const std::size_t mc = candidates.size();
    // A proper divisor of an lcm has lower degree, so grouping equal lcms by
    // (degree, exponents) is enough for the minimality scan.
    std::vector<std::uint32_t> idx(mc);
    for (std::size_t i = 0; i < mc; ++i) idx[i] = static_cast<std::uint32_t>(i);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      const SPair& pa = candidates[a];
      const SPair& pb = candidates[b];
      if (pa.degree != pb.degree) return pa.degree < pb.degree;
      const auto ea = pa.lcm.exponents(), eb = pb.lcm.exponents();
      if (auto c = std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end()); c != 0)
        return c < 0;
      return a < b;
    });
    std::vector<Monomial> minimal;
    for (std::size_t a = 0; a < mc;) {
      std::size_t b = a;
      const Monomial& l = candidates[idx[a]].lcm;
      while (b < mc && candidates[idx[b]].lcm == l) ++b;
      const bool dominated = std::any_of(minimal.begin(), minimal.end(),
                                         [&](const Monomial& q) { return divides(q, l); });
      if (!dominated) {
        minimal.push_back(l);
        bool any_coprime = false;
        for (std::size_t c = a; c < b; ++c)
          if (coprime(state.basis[candidates[idx[c]].i].lead_monomial(), lf)) any_coprime = true;
        // idx[a] is the smallest basis index in the group.
        if (!any_coprime) fresh.push_back(candidates[idx[a]]);
      }
      a = b;
    }
    std::sort(fresh.begin(), fresh.end(), [](const SPair& a, const SPair& b) { return a.i < b.i; });
  }

  for (SPair& p : fresh) {
    p.seq = state.next_seq++;
    state.queue.push_back(std::move(p));
  }
  if (prune)
    for (std::size_t i = 0; i < m; ++i)
      if (state.active[i] && divides(lf, state.basis[i].lead_monomial())) state.active[i] = false;
  state.basis.push_back(std::move(poly));
  state.sugar.push_back(sugar);
  state.active.push_back(true);
}

std::vector<Polynomial> reduce_basis(std::span<const Polynomial> gb) {
  std::vector<Polynomial> sorted;
  for (const Polynomial& g : gb)
    if (!g.is_zero()) sorted.push_back(g);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Polynomial& f, const Polynomial& g) {
    return order_cmp(f.lead_monomial(), g.lead_monomial(), f.order()) < 0;
  });
  std::vector<Polynomial> minimal;
  for (const Polynomial& g : sorted) {
    const bool redundant = std::any_of(minimal.begin(), minimal.end(), [&](const Polynomial& f) {
      return divides(f.lead_monomial(), g.lead_monomial());
    });
    if (!redundant) minimal.push_back(g);
  }
  std::vector<Polynomial> reduced;
  reduced.reserve(minimal.size());
  for (const Polynomial& g : minimal) {
    const Term& lt = g.lead_term();
    const Polynomial lead(g.nvars(), g.order(), {lt});
    const Polynomial tail = g - lead;
    reduced.push_back((normal_form(tail, minimal).remainder + lead).monic());
  }
  return reduced;
}

bool is_groebner_basis(std::span<const Polynomial> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!normal_form(s_polynomial(basis[i], basis[j]), basis).remainder.is_zero()) return false;
  return true;
}

GroebnerResult run(std::span<const Polynomial> generators, const BuchbergerOptions& options,
                   const MonomialOrder& order) {
  PairState state;
  std::size_t nvars = 0;
  for (const Polynomial& g : generators) {
    if (g.is_zero()) throw InvalidArgument("Buchberger input contains the zero polynomial");
    if (!state.basis.empty() && g.nvars() != nvars)
      throw DimensionError("generators live in different rings");
    nvars = g.nvars();
    Polynomial h = g.with_order(order);
    const int sugar = h.degree();
    update_pairs(state, std::move(h), sugar, options.pair_elimination, options.prune_redundant);
  }

  // Reducers are tried by increasing leading monomial, earliest insertion first on ties.
  auto lead_less = [&](const Polynomial& f, const Polynomial& g) {
    return order_cmp(f.lead_monomial(), g.lead_monomial(), order) < 0;
  };
  std::vector<Polynomial> reducers = state.basis;
  std::stable_sort(reducers.begin(), reducers.end(), lead_less);

  RunStats stats;
  while (!state.queue.empty()) {
    if (options.pair_budget != 0 && stats.pairs_processed >= options.pair_budget)
      throw BudgetExceeded("pair budget of " + std::to_string(options.pair_budget) + " exhausted");
    const SPair p = select_pair(state.queue, options.strategy, order);
    const Polynomial s = s_polynomial(state.basis[p.i], state.basis[p.j]);
    NormalForm nf = normal_form(s, reducers);
    ++stats.pairs_processed;
    stats.polynomial_additions += 1 + nf.additions;
    if (nf.remainder.is_zero()) {
      ++stats.zero_reductions;
    } else {
      ++stats.nonzero_reductions;
      if (options.prune_redundant)
        std::erase_if(reducers, [&](const Polynomial& r) {
          return divides(nf.remainder.lead_monomial(), r.lead_monomial());
        });
      reducers.insert(std::upper_bound(reducers.begin(), reducers.end(), nf.remainder, lead_less),
                      nf.remainder);
      update_pairs(state, std::move(nf.remainder), p.sugar, options.pair_elimination,
                   options.prune_redundant);
    }
  }

  GroebnerResult result{reduce_basis(state.basis), stats};
  result.stats.gb_size = result.basis.size();
  for (const Polynomial& g : result.basis)
    result.stats.gb_max_degree = std::max(result.stats.gb_max_degree, g.degree());
  return result;
}

}  // namespace gbcost
