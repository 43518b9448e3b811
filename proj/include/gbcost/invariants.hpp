#pragma once

#include <span>

#include "gbcost/poly.hpp"

namespace gbcost {

struct DegreeStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

/// Statistics of generator degrees, where a generator's degree is its maximum
/// term degree. Throws InvalidArgument on empty input.
DegreeStats degree_stats(std::span<const Polynomial> generators);

/// Number of generators whose leading monomial under `order` is a pure power.
int pure_power_count(std::span<const Polynomial> generators,
                     const MonomialOrder& order = MonomialOrder::grevlex());

/// Krull dimension of R/I from the leading monomials of a reduced Groebner
/// basis: the largest variable subset S such that no leading monomial has
/// support inside S. The zero ideal has dimension nvars; the unit ideal
/// returns -1.
int krull_dimension(std::span<const Polynomial> reduced_gb, std::size_t nvars);

/// Same computation on bare monomials (generators of a monomial ideal).
int krull_dimension_of_monomials(std::span<const Monomial> monomials, std::size_t nvars);

/// Generator features used as regression predictors.
struct FeatureVector {
  int min_deg = 0;
  int max_deg = 0;
  double mean_deg = 0.0;
  double std_deg = 0.0;
  int pure_powers = 0;
  int num_gens = 0;
  int dimension = -1;  // -1 when not computed or degenerate

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Features of a generating set. `dimension` is copied in as given.
FeatureVector extract_features(std::span<const Polynomial> generators, int dimension = -1);

}  // namespace gbcost
