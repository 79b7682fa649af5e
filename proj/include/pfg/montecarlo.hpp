#ifndef PFG_MONTECARLO_HPP
#define PFG_MONTECARLO_HPP

#include <cstdint>
#include <memory>

#include "pfg/core.hpp"
#include "pfg/hu_yang_table.hpp"
#include "pfg/rng.hpp"
#include "pfg/weightings.hpp"

namespace pfg {

// Everything a partition sampler needs: a deterministic stream, the
// weighting, and (for the uniform-partition weighting) the cover counts.
// One state per sample keeps streams independent of scheduling.
struct SamplerState {
  SamplerState(WeightingPtr weighting, std::uint64_t seed,
               std::shared_ptr<const HuYangTable> table = nullptr)
      : rng(seed), weighting(std::move(weighting)), hu_yang(std::move(table)) {}

  int player_count() const { return weighting->player_count(); }

  SplitMix64 rng;
  WeightingPtr weighting;
  std::shared_ptr<const HuYangTable> hu_yang;
};

// Uniform random permutation via the Fisher-Yates shuffle with unbiased
// integer draws.
Permutation sample_permutation(SamplerState& state);

// A partition distributed like the arrangements that form when players
// leave in the given order and each departure is resolved by the weighting.
// Built-in weightings use their bespoke samplers; custom weightings are
// simulated one transfer at a time from their weights.
Partition sample_partition(SamplerState& state, const Permutation& leave_order);

struct ApproxResult {
  PayoffVector estimate;
  std::vector<double> variance;  // per-player sample variance of contributions
  std::uint64_t samples = 0;

  double standard_error(Player i) const;
};

// Monte Carlo estimate of the extended value: m samples of (permutation,
// partition), each unwound by returning players to the meeting point in
// reverse leaving order and crediting each with the change of value.
// Per-sample streams are derived from (seed, sample index), and chunked
// accumulation makes the result independent of the worker count.
ApproxResult approximate(const PartitionFunctionGame& v, WeightingPtr alpha,
                         std::uint64_t samples, std::uint64_t seed, int workers = 1);

struct ErrorSpec {
  double epsilon = 0.0;       // absolute error target
  double beta = 0.0;          // failure probability
  double min_contribution = 0.0;
  double max_contribution = 0.0;
};

// Smallest m with (sigma^2 / eps^2) * z^2 <= m, where sigma^2 is bounded by
// ((max-min)/2)^2 and z is the 1-beta/2 normal quantile.
std::uint64_t required_samples(const ErrorSpec& spec);

// The error bound the same inequality yields for a given sample count.
double error_bound_for_samples(std::uint64_t samples, double beta,
                               double min_contribution, double max_contribution);

// Inverse standard normal CDF (rational approximation polished by one
// Newton step on erfc; absolute error well under 1e-9).
double normal_quantile(double p);

enum class GameDistribution { kNormal, kUniform };

GameDistribution parse_distribution(std::string_view name);
std::string_view distribution_name(GameDistribution d);

struct ContributionBounds {
  double min = 0.0;
  double max = 0.0;
};

// A-priori bounds on a single player's change of value for the two random
// game families: normal -> (1.3 - 0.6n, 0.6n + 0.7), uniform -> (-n+1, n).
ContributionBounds contribution_bounds(GameDistribution distribution, int n);

}  // namespace pfg

#endif  // PFG_MONTECARLO_HPP
