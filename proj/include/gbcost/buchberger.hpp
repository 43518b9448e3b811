#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbcost/poly.hpp"

namespace gbcost {

/// S-pair selection strategy.
enum class Strategy : std::uint8_t { first, degree, normal, sugar };

inline constexpr Strategy kAllStrategies[] = {Strategy::first, Strategy::degree, Strategy::normal,
                                              Strategy::sugar};

std::string_view to_string(Strategy s) noexcept;
/// Accepts "first", "degree", "normal", "sugar" (case-insensitive).
std::optional<Strategy> parse_strategy(std::string_view name);

struct SPair {
  std::size_t i = 0;
  std::size_t j = 0;
  Monomial lcm;
  int degree = 0;
  int sugar = 0;
  std::uint64_t seq = 0;
};

struct RunStats {
  std::uint64_t polynomial_additions = 0;
  std::uint64_t pairs_processed = 0;
  std::uint64_t zero_reductions = 0;
  std::uint64_t nonzero_reductions = 0;
  std::uint64_t gb_size = 0;
  int gb_max_degree = 0;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

/// Working state of a run: the growing basis with per-element sugar and the
/// pending pair queue in insertion order.
struct PairState {
  std::vector<Polynomial> basis;
  std::vector<int> sugar;
  /// False for elements superseded by a later one with a dividing leading
  /// monomial (only maintained when pruning).
  std::vector<bool> active;
  std::vector<SPair> queue;
  std::uint64_t next_seq = 0;
};

/// Removes and returns the pair chosen by `strategy`:
///  first  - smallest insertion sequence
///  degree - smallest lcm total degree, then insertion sequence
///  normal - smallest lcm under `order`, then insertion sequence
///  sugar  - smallest sugar, then the normal rule
/// Throws InvalidArgument on an empty queue.
SPair select_pair(std::vector<SPair>& queue, Strategy strategy, const MonomialOrder& order);

/// Appends `poly` (with sugar `sugar`) to the basis and updates the queue.
/// With elimination on, applies the Gebauer-Moeller B, M and F criteria and
/// Buchberger's coprime criterion; otherwise every new pair is queued. With
/// `prune`, earlier elements whose leading monomial is divisible by the new one
/// are deactivated and form no further pairs.
void update_pairs(PairState& state, Polynomial poly, int sugar, bool elimination = true,
                  bool prune = false);

struct BuchbergerOptions {
  Strategy strategy = Strategy::degree;
  bool pair_elimination = true;
  /// Maximum number of pairs to process; 0 means unlimited.
  std::uint64_t pair_budget = 0;
  /// Deactivate superseded basis elements (see update_pairs). Changes the
  /// pair sequence and therefore the counters; off for measured runs.
  bool prune_redundant = false;
};

struct GroebnerResult {
  std::vector<Polynomial> basis;
  RunStats stats;
};

/// Buchberger's algorithm. Returns the reduced Groebner basis of the ideal
/// generated by `generators` under `order` (monic, interreduced, sorted by
/// increasing leading monomial). S-polynomials are reduced by the current
/// basis ordered by increasing leading monomial (ties by insertion), so
/// normal_form picks the smallest dividing leading monomial.
/// The addition counter covers the main loop:
/// one per S-polynomial plus one per reduction step. Final interreduction is
/// not counted. Throws BudgetExceeded past `pair_budget`.
GroebnerResult run(std::span<const Polynomial> generators, const BuchbergerOptions& options,
                   const MonomialOrder& order = MonomialOrder::grevlex());

/// Minimalizes, interreduces and normalizes any Groebner basis into the reduced one.
std::vector<Polynomial> reduce_basis(std::span<const Polynomial> gb);

/// Checks that every S-polynomial of `basis` reduces to zero modulo `basis`.
bool is_groebner_basis(std::span<const Polynomial> basis);

}  // namespace gbcost
