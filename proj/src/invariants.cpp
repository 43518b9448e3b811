#include "gbcost/invariants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "gbcost/errors.hpp"

namespace gbcost {

DegreeStats degree_stats(std::span<const Polynomial> generators) {
  if (generators.empty()) throw InvalidArgument("degree statistics of an empty generating set");
  DegreeStats st;
  st.min = generators.front().degree();
  st.max = st.min;
  double sum = 0.0;
  for (const Polynomial& g : generators) {
    const int d = g.degree();
    st.min = std::min(st.min, d);
    st.max = std::max(st.max, d);
    sum += d;
  }
  const auto count = static_cast<double>(generators.size());
  st.mean = sum / count;
  double ss = 0.0;
  for (const Polynomial& g : generators) {
    const double dev = g.degree() - st.mean;
    ss += dev * dev;
  }
  st.std = std::sqrt(ss / count);
  return st;
}

int pure_power_count(std::span<const Polynomial> generators, const MonomialOrder& order) {
  int count = 0;
  for (const Polynomial& g : generators) {
    if (g.is_zero()) throw InvalidArgument("pure power count of a zero generator");
    const Monomial* lead = &g.terms().front().mono;
    if (!(g.order() == order)) {
      for (const Term& t : g.terms())
        if (order_cmp(t.mono, *lead, order) > 0) lead = &t.mono;
    }
    if (lead->is_pure_power()) ++count;
  }
  return count;
}

int krull_dimension_of_monomials(std::span<const Monomial> monomials, std::size_t nvars) {
  if (nvars > 16) throw DimensionError("subset enumeration supports at most 16 variables");
  std::vector<std::uint32_t> supports;
  for (const Monomial& m : monomials) {
    if (m.nvars() != nvars) throw DimensionError("monomial in the wrong ring");
    if (m.is_one()) return -1;
    supports.push_back(m.support());
  }
  int best = 0;
  const std::uint32_t full = nvars == 0 ? 0u : ((1u << nvars) - 1u);
  for (std::uint32_t s = 0; s <= full; ++s) {
    const int size = std::popcount(s);
    if (size <= best) continue;
    const bool independent = std::none_of(supports.begin(), supports.end(),
                                          [s](std::uint32_t sup) { return (sup & ~s) == 0; });
    if (independent) best = size;
    if (s == full) break;
  }
  return best;
}

int krull_dimension(std::span<const Polynomial> reduced_gb, std::size_t nvars) {
  std::vector<Monomial> leads;
  leads.reserve(reduced_gb.size());
  for (const Polynomial& g : reduced_gb) {
    if (g.is_zero()) continue;
    leads.push_back(g.lead_monomial());
  }
  return krull_dimension_of_monomials(leads, nvars);
}

FeatureVector extract_features(std::span<const Polynomial> generators, int dimension) {
  const DegreeStats st = degree_stats(generators);
  FeatureVector f;
  f.min_deg = st.min;
  f.max_deg = st.max;
  f.mean_deg = st.mean;
  f.std_deg = st.std;
  f.pure_powers = pure_power_count(generators);
  f.num_gens = static_cast<int>(generators.size());
  f.dimension = dimension;
  return f;
}

}  // namespace gbcost
