#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gbcost/lattice.hpp"
#include "gbcost/poly.hpp"

namespace gbcost {

enum class BinomialMode : std::uint8_t { uniform, weighted };

/// The n-d-s-(uniform|weighted) binomial model.
struct BinomialDistSpec {
  int n = 3;
  int d = 20;
  int s = 10;
  BinomialMode mode = BinomialMode::weighted;

  friend bool operator==(const BinomialDistSpec&, const BinomialDistSpec&) = default;
};

/// The T(D, L, U, n) toric model: D x n matrices whose columns have positive
/// total degree at most U and negative total degree at most L.
struct ToricDistSpec {
  int D = 2;
  int L = 0;
  int U = 5;
  int n = 8;

  friend bool operator==(const ToricDistSpec&, const ToricDistSpec&) = default;
};

using DistSpec = std::variant<BinomialDistSpec, ToricDistSpec>;

/// "3-20-10-weighted" or "T(2,0,5,8)".
std::string dist_name(const DistSpec& spec);
/// Parses the short names produced by dist_name. Throws ConfigError.
DistSpec parse_dist_name(const std::string& name);
/// Throws ConfigError on invalid parameters.
void validate(const DistSpec& spec);
/// Number of variables of the ideals drawn from `spec`.
int ring_vars(const DistSpec& spec);

/// Number of monomials of degree 1..d in n variables: C(n+d, n) - 1.
std::uint64_t monomial_pool_size(int n, int d);

/// All monomials in n variables of exactly degree `degree`, in a fixed order.
std::vector<Monomial> monomials_of_degree(int n, int degree);

/// Draws binomial generating sets. Holds the precomputed monomial pool so that
/// many draws from one distribution are cheap. Thread-safe for concurrent sample().
class BinomialSampler {
 public:
  explicit BinomialSampler(const BinomialDistSpec& spec);

  /// s binomials c1*m1 - c2*m2 with m1 != m2, nonzero coefficients and
  /// degrees in [1, d]. Deterministic in `seed`.
  std::vector<Polynomial> sample(std::uint64_t seed) const;

  const BinomialDistSpec& spec() const noexcept { return spec_; }

 private:
  BinomialDistSpec spec_;
  std::vector<std::vector<Monomial>> by_degree_;  // index = degree
  std::uint64_t total_ = 0;
};

std::vector<Polynomial> sample_binomial_system(const BinomialDistSpec& spec, std::uint64_t seed);

struct ToricMatrix {
  IntMatrix entries;
  /// Empty until computed by toric_ideal() or lattice_kernel().
  std::vector<IntVector> kernel_basis;
};

/// Nonzero non-negative D-vectors with component sum in [1, U], in lexicographic order.
std::vector<IntVector> admissible_columns(int D, int U);

class ToricSampler {
 public:
  /// Throws UnsupportedParameter when L > 0.
  explicit ToricSampler(const ToricDistSpec& spec);

  /// Each column is drawn uniformly from admissible_columns(D, U).
  ToricMatrix sample(std::uint64_t seed) const;

  const ToricDistSpec& spec() const noexcept { return spec_; }

 private:
  ToricDistSpec spec_;
  std::vector<IntVector> columns_;
};

ToricMatrix sample_toric_matrix(const ToricDistSpec& spec, std::uint64_t seed);

/// Generators of the toric ideal I_A (reduced grevlex Groebner basis, monic).
/// Forms the lattice ideal of the kernel basis and saturates it by
/// x1*...*xn through one elimination Groebner basis with an auxiliary variable.
/// Fills `a.kernel_basis` when empty. Throws BudgetExceeded when the saturation
/// run processes more than `pair_budget` pairs (0 = unlimited).
std::vector<Polynomial> toric_ideal(ToricMatrix& a, std::uint64_t pair_budget = 0);

/// x^u - x^v with A u = A v. Generators with any other shape fail.
bool satisfies_toric_membership(const IntMatrix& a, const Polynomial& generator);

}  // namespace gbcost
