#ifndef PFG_BENCH_HPP
#define PFG_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfg/core.hpp"
#include "pfg/montecarlo.hpp"

namespace pfg {

// A reproducible random game family. Values are produced on demand by
// hashing the embedded coalition together with the seed, so no table is
// materialized and the same spec always evaluates identically.
//   normal:  v(S,P) = |S| * X, X ~ N(1, 0.1) redrawn until 0.7 <= X <= 1.3
//   uniform: v(S,P) = |S| * U(0,1)
struct RandomGameSpec {
  GameDistribution distribution = GameDistribution::kNormal;
  int n = 0;
  std::uint64_t seed = 0;
};

PartitionFunctionGame make_random_game(const RandomGameSpec& spec);

struct ExperimentRow {
  int n = 0;
  std::string weighting;
  std::string method;  // "exact" | "approx"
  std::optional<std::uint64_t> samples;
  double seconds = 0.0;
  std::optional<double> max_error;       // vs exact ground truth, when available
  std::optional<double> theoretical_eps;  // bound implied by the sample count

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
};

inline constexpr const char* kCsvHeader =
    "n,weighting,method,samples,seconds,max_error,theoretical_eps";

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_csv(std::istream& is);

// For each sample count in the schedule and each trial, estimates the value
// of a seeded random game and records the maximal per-player deviation from
// the exact value next to the theoretical bound for that sample count.
// Needs exact ground truth, hence n <= 12.
ExperimentResult run_error_experiment(const RandomGameSpec& game_spec,
                                      const std::string& weighting,
                                      const std::vector<std::uint64_t>& schedule,
                                      int trials, double beta = 0.01);

// Wall-clock rows for the exact computation (n <= 12 only) and for the
// estimator run at the sample count the error bound demands. Each timing is
// the median of `repeats` runs after one discarded warm-up.
ExperimentResult run_timing_experiment(GameDistribution distribution, int n_min,
                                       int n_max, const std::string& weighting,
                                       double epsilon, double beta, std::uint64_t seed,
                                       int repeats = 3, int workers = 1);

}  // namespace pfg

#endif  // PFG_BENCH_HPP
