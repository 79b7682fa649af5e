#include "pfg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pfg/exact.hpp"
#include "pfg/rng.hpp"

namespace pfg {

namespace {

double draw_value(const RandomGameSpec& spec, Coalition s, const Partition& p) {
  std::uint64_t h = mix_seed(spec.seed, 0x67A3E5ull + static_cast<std::uint64_t>(spec.n));
  h = mix_seed(h, s.mask());
  for (int b = 0; b < p.block_count(); ++b) h = mix_seed(h, p.block(b).mask());
  SplitMix64 g(h);
  if (spec.distribution == GameDistribution::kNormal) {
    // Redraw outside the limits rather than clamping, so the in-range shape
    // is untouched.
    double x;
    do {
      x = 1.0 + 0.1 * normal_quantile(g.uniform01());
    } while (x < 0.7 || x > 1.3);
    return s.size() * x;
  }
  return s.size() * g.uniform01();
}

double now_diff_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PartitionFunctionGame make_random_game(const RandomGameSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxPlayers)
    throw size_error("random games require 1 <= n <= 20");
  const RandomGameSpec copy = spec;
  return PartitionFunctionGame(spec.n, [copy](Coalition s, const Partition& p) {
    return draw_value(copy, s, p);
  });
}

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << kCsvHeader << '\n';
  for (const ExperimentRow& r : rows) {
    os << r.n << ',' << r.weighting << ',' << r.method << ',';
    if (r.samples) os << *r.samples;
    os << ',' << format_double(r.seconds) << ',';
    if (r.max_error) os << format_double(*r.max_error);
    os << ',';
    if (r.theoretical_eps) os << format_double(*r.theoretical_eps);
    os << '\n';
  }
}

std::vector<ExperimentRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw parse_error("experiment CSV must start with the header: " + std::string(kCsvHeader));
  std::vector<ExperimentRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 7)
      throw parse_error("CSV line " + std::to_string(lineno) + ": expected 7 fields");
    ExperimentRow r;
    r.n = std::stoi(fields[0]);
    r.weighting = fields[1];
    r.method = fields[2];
    if (!fields[3].empty()) r.samples = std::stoull(fields[3]);
    r.seconds = std::stod(fields[4]);
    if (!fields[5].empty()) r.max_error = std::stod(fields[5]);
    if (!fields[6].empty()) r.theoretical_eps = std::stod(fields[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

ExperimentResult run_error_experiment(const RandomGameSpec& game_spec,
                                      const std::string& weighting,
                                      const std::vector<std::uint64_t>& schedule,
                                      int trials, double beta) {
  if (game_spec.n > kMaxEnumerationPlayers)
    throw size_error("error experiment needs exact ground truth; requires n <= 12");
  const auto game = make_random_game(game_spec);
  const auto alpha = make_weighting(weighting, game_spec.n);
  const PayoffVector truth = exact_value(game, *alpha);
  const ContributionBounds bounds = contribution_bounds(game_spec.distribution, game_spec.n);

  ExperimentResult result;
  for (int trial = 0; trial < trials; ++trial) {
    for (std::uint64_t m : schedule) {
      const std::uint64_t run_seed = mix_seed(game_spec.seed, mix_seed(trial + 1, m));
      const auto t0 = std::chrono::steady_clock::now();
      const ApproxResult est = approximate(game, alpha, m, run_seed);
      const double seconds = now_diff_seconds(t0);
      double max_err = 0.0;
      for (int i = 0; i < game_spec.n; ++i)
        max_err = std::max(max_err, std::abs(est.estimate[i] - truth[i]));
      ExperimentRow row;
      row.n = game_spec.n;
      row.weighting = alpha->name();
      row.method = "approx";
      row.samples = m;
      row.seconds = seconds;
      row.max_error = max_err;
      row.theoretical_eps = error_bound_for_samples(m, beta, bounds.min, bounds.max);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

namespace {

double median_timing(int repeats, const std::function<void()>& fn) {
  fn();  // warm-up, discarded
  std::vector<double> times;
  times.reserve(repeats);
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    times.push_back(now_diff_seconds(t0));
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

ExperimentResult run_timing_experiment(GameDistribution distribution, int n_min,
                                       int n_max, const std::string& weighting,
                                       double epsilon, double beta, std::uint64_t seed,
                                       int repeats, int workers) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad player range");
  if (n_max > kMaxPlayers) throw size_error("timing experiment requires n <= 20");
  ExperimentResult result;
  for (int n = n_min; n <= n_max; ++n) {
    const RandomGameSpec spec{distribution, n, mix_seed(seed, n)};
    const auto game = make_random_game(spec);
    const auto alpha = make_weighting(weighting, n);

    if (n <= kMaxEnumerationPlayers) {
      ExperimentRow row;
      row.n = n;
      row.weighting = alpha->name();
      row.method = "exact";
      row.seconds = median_timing(repeats, [&] { exact_value(game, *alpha); });
      result.rows.push_back(std::move(row));
    }

    const ContributionBounds bounds = contribution_bounds(distribution, n);
    const std::uint64_t m =
        required_samples({epsilon, beta, bounds.min, bounds.max});
    ExperimentRow row;
    row.n = n;
    row.weighting = alpha->name();
    row.method = "approx";
    row.samples = m;
    row.theoretical_eps = epsilon;
    row.seconds = median_timing(
        repeats, [&] { approximate(game, alpha, m, mix_seed(spec.seed, 0xA), workers); });
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace pfg
