#ifndef PFG_EXACT_HPP
#define PFG_EXACT_HPP

#include <cstdint>
#include <unordered_map>

#include "pfg/core.hpp"
#include "pfg/weightings.hpp"

namespace pfg {

// c * e^(S,P): the game worth c at one embedded coalition and 0 elsewhere.
struct SimpleGame {
  EmbeddedCoalition anchor;
  double scale = 1.0;

  PartitionFunctionGame to_game(int n) const;
};

// v(S,P) - v(S-i, tau_i^T(P)): the loss coalition S suffers when i moves to
// target T. (S,P) embedded, i in S, T an outside block of P or empty.
double elementary_contribution(const PartitionFunctionGame& v, Player i, Coalition s,
                               const Partition& p, Coalition target);

// The weighted average of i's elementary contributions out of (S,P) over
// all admissible targets, with weights drawn from the weighting.
double alpha_marginal_contribution(const PartitionFunctionGame& v,
                                   const AlphaWeighting& alpha, Player i,
                                   Coalition s, const Partition& p);

// Probability that arrangement P forms when players leave in order pi,
// chaining the weighting along the departures.
double formation_probability(const AlphaWeighting& alpha, const Permutation& pi,
                             const Partition& p);

// The extended value by direct evaluation of the defining double sum over
// permutations and partitions. Trusted by construction and exponentially
// expensive; reference use only. n <= 8.
PayoffVector exact_value_by_permutation_sum(const PartitionFunctionGame& v,
                                            const AlphaWeighting& alpha);

// The extended value by a single sweep over embedded coalitions. For the
// five built-in weightings the sum over leaving orders collapses to a
// function of the outside block sizes, which makes n <= 12 feasible; custom
// weightings run through a trajectory dynamic program capped at n <= 10.
// Agrees with exact_value_by_permutation_sum to ~1e-12.
PayoffVector exact_value(const PartitionFunctionGame& v, const AlphaWeighting& alpha);

// Payoff vectors of the simple games c * e^(S,P), computed purely from the
// recursion the uniqueness argument provides (no appeal to the closed
// formula): outside players are pushed back into the anchor through
// null-player constructions, inside players split the remainder equally.
// Memoizes one vector per anchor; reusable across calls. n <= 8.
class BasisRecursion {
 public:
  BasisRecursion(WeightingPtr alpha, int n);

  const PayoffVector& vector(const EmbeddedCoalition& anchor);

  // Sum of v(S,P) * vector(S,P) over every embedded coalition: equals the
  // extended value of v by linearity. n <= kMaxEnumerationPlayers for the
  // enumeration, in practice small n.
  PayoffVector decompose(const PartitionFunctionGame& v);

 private:
  WeightingPtr alpha_;
  int n_;
  std::unordered_map<EmbeddedCoalition, PayoffVector, EmbeddedCoalitionHash> memo_;
};

PayoffVector basis_value(double c, const EmbeddedCoalition& anchor, WeightingPtr alpha);

// The game c * [alpha_i(S,P) e^(S+i, tau_i^S(P)) + e^(S,P)] in which player
// i (not in S) contributes nothing under the given weighting.
PartitionFunctionGame null_player_game(int n, const AlphaWeighting& alpha, Player i,
                                       Coalition s, const Partition& p, double c);

// True when i's weighted marginal contribution vanishes at every embedded
// coalition containing it (exhaustive; n <= 8).
bool is_null_player(const PartitionFunctionGame& v, const AlphaWeighting& alpha, Player i);

struct AxiomCheck {
  bool passed = true;
  std::string detail;
};

struct AxiomReport {
  AxiomCheck efficiency;
  AxiomCheck symmetry;
  AxiomCheck additivity;
  AxiomCheck null_player;

  bool all_passed() const {
    return efficiency.passed && symmetry.passed && additivity.passed && null_player.passed;
  }
};

using ValueFunction =
    std::function<PayoffVector(const PartitionFunctionGame&, const AlphaWeighting&)>;

// Verifies the four defining axioms of the value function on game v:
// efficiency on v itself; symmetry against every permutation of v;
// additivity on seeded random pairs; and the null-player property on
// constructed games with a provably contribution-free player. n <= 6.
AxiomReport check_axioms(const PartitionFunctionGame& v, const AlphaWeighting& alpha,
                         const ValueFunction& value, std::uint64_t seed = 1,
                         double tol = 1e-9);

}  // namespace pfg

#endif  // PFG_EXACT_HPP
