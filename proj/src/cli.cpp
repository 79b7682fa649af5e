#include "pfg/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pfg/bench.hpp"
#include "pfg/exact.hpp"
#include "pfg/game_io.hpp"
#include "pfg/montecarlo.hpp"
#include "pfg/weightings.hpp"

namespace pfg {

namespace {

using nlohmann::json;

struct GameSourceFlags {
  std::string game_path;
  std::string distribution;
  int n = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--game", game_path, "Game file (JSON) to load");
    cmd->add_option("--distribution", distribution, "Random game family: normal|uniform");
    cmd->add_option("--n", n, "Player count for a generated game");
  }

  bool is_file() const { return !game_path.empty(); }

  PartitionFunctionGame resolve(std::uint64_t seed) const {
    const bool file = is_file();
    const bool generated = !distribution.empty() || n > 0;
    if (file == generated)
      throw config_error("pick exactly one game source: --game, or --distribution with --n");
    if (file) return load_game_file(game_path);
    if (distribution.empty() || n <= 0)
      throw config_error("generated games need both --distribution and --n");
    return make_random_game({parse_distribution(distribution), n, seed});
  }
};

void emit(std::ostream& out, const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw parse_error("cannot write to " + out_path);
  f << text;
}

json payoffs_to_json(const PayoffVector& phi) {
  json arr = json::array();
  for (double x : phi) arr.push_back(x);
  return arr;
}

double efficiency_gap(const PartitionFunctionGame& v, const PayoffVector& phi) {
  double sum = 0.0;
  for (double x : phi) sum += x;
  return sum - v.value(Coalition::full(v.player_count()), Partition::grand(v.player_count()));
}

int run_exact(const GameSourceFlags& source, const std::string& weighting,
              std::uint64_t seed, const std::string& format, const std::string& out_path,
              std::ostream& out) {
  const auto game = source.resolve(seed);
  const int n = game.player_count();
  const auto alpha = make_weighting(weighting, n);
  const PayoffVector phi = exact_value(game, *alpha);

  std::optional<AxiomReport> axioms;
  if (n <= 6) {
    axioms = check_axioms(game, *alpha,
                          [](const PartitionFunctionGame& g, const AlphaWeighting& a) {
                            return exact_value(g, a);
                          },
                          seed);
  }

  std::ostringstream text;
  if (format == "csv") {
    text << "player,payoff\n";
    for (int i = 0; i < n; ++i) text << (i + 1) << ',' << json(phi[i]).dump() << '\n';
  } else {
    json doc;
    doc["command"] = "exact";
    doc["n"] = n;
    doc["weighting"] = alpha->name();
    doc["seed"] = seed;
    doc["payoffs"] = payoffs_to_json(phi);
    doc["grand_value"] =
        game.value(Coalition::full(n), Partition::grand(n));
    doc["efficiency_gap"] = efficiency_gap(game, phi);
    if (axioms) {
      doc["axioms"] = {{"efficiency", axioms->efficiency.passed},
                       {"symmetry", axioms->symmetry.passed},
                       {"additivity", axioms->additivity.passed},
                       {"null_player", axioms->null_player.passed},
                       {"all_passed", axioms->all_passed()}};
    } else {
      doc["axioms"] = nullptr;  // exhaustive checks are gated to n <= 6
    }
    text << doc.dump(2) << '\n';
  }
  emit(out, out_path, text.str());
  if (axioms && !axioms->all_passed()) return kExitParse;
  return kExitOk;
}

int run_approx(const GameSourceFlags& source, const std::string& weighting,
               std::uint64_t samples_flag, double epsilon, double beta_flag,
               double min_contrib, double max_contrib, bool has_min, bool has_max,
               std::uint64_t seed, int workers, const std::string& format,
               const std::string& out_path, std::ostream& out) {
  const auto game = source.resolve(seed);
  const int n = game.player_count();
  const auto alpha = make_weighting(weighting, n);

  const bool eps_mode = epsilon > 0.0;
  if (eps_mode == (samples_flag > 0))
    throw config_error("pick exactly one of --samples or --epsilon/--beta");
  const double beta = beta_flag > 0.0 ? beta_flag : 0.01;

  std::optional<ContributionBounds> bounds;
  if (source.is_file()) {
    if (has_min != has_max)
      throw config_error("--min-contrib and --max-contrib must be given together");
    if (has_min) bounds = ContributionBounds{min_contrib, max_contrib};
  } else {
    bounds = contribution_bounds(parse_distribution(source.distribution), n);
  }

  std::uint64_t m = samples_flag;
  if (eps_mode) {
    if (!bounds)
      throw config_error(
          "--epsilon mode on a file game needs --min-contrib and --max-contrib");
    m = required_samples({epsilon, beta, bounds->min, bounds->max});
  }

  const ApproxResult res = approximate(game, alpha, m, seed, workers);

  std::ostringstream text;
  if (format == "csv") {
    text << "player,estimate,standard_error\n";
    for (int i = 0; i < n; ++i)
      text << (i + 1) << ',' << json(res.estimate[i]).dump() << ','
           << json(res.standard_error(i)).dump() << '\n';
  } else {
    json doc;
    doc["command"] = "approx";
    doc["n"] = n;
    doc["weighting"] = alpha->name();
    doc["seed"] = seed;
    doc["workers"] = workers;
    doc["samples"] = m;
    doc["beta"] = beta;
    doc["payoffs"] = payoffs_to_json(res.estimate);
    json se = json::array();
    for (int i = 0; i < n; ++i) se.push_back(res.standard_error(i));
    doc["standard_errors"] = std::move(se);
    if (bounds) {
      doc["theoretical_epsilon"] =
          error_bound_for_samples(m, beta, bounds->min, bounds->max);
    } else {
      doc["theoretical_epsilon"] = nullptr;
    }
    doc["efficiency_gap"] = efficiency_gap(game, res.estimate);
    text << doc.dump(2) << '\n';
  }
  emit(out, out_path, text.str());
  return kExitOk;
}

int run_sample_size(double epsilon, double beta, double min_contrib, double max_contrib,
                    bool has_min, bool has_max, const std::string& distribution, int n,
                    const std::string& format, const std::string& out_path,
                    std::ostream& out) {
  ContributionBounds bounds{};
  if (has_min && has_max) {
    bounds = {min_contrib, max_contrib};
  } else if (!distribution.empty() && n > 0) {
    bounds = contribution_bounds(parse_distribution(distribution), n);
  } else {
    throw config_error(
        "sample-size needs --min-contrib/--max-contrib or --distribution/--n");
  }
  const std::uint64_t m = required_samples({epsilon, beta, bounds.min, bounds.max});
  const double z = normal_quantile(1.0 - beta / 2.0);

  std::ostringstream text;
  if (format == "csv") {
    text << "epsilon,beta,min_contribution,max_contribution,z,samples\n";
    text << json(epsilon).dump() << ',' << json(beta).dump() << ','
         << json(bounds.min).dump() << ',' << json(bounds.max).dump() << ','
         << json(z).dump() << ',' << m << '\n';
  } else {
    json doc;
    doc["command"] = "sample-size";
    doc["epsilon"] = epsilon;
    doc["beta"] = beta;
    doc["min_contribution"] = bounds.min;
    doc["max_contribution"] = bounds.max;
    doc["z"] = z;
    doc["samples"] = m;
    text << doc.dump(2) << '\n';
  }
  emit(out, out_path, text.str());
  return kExitOk;
}

int run_validate(const std::string& weighting, int n, const std::string& format,
                 const std::string& out_path, std::ostream& out) {
  const auto alpha = make_weighting(weighting, n);
  const ValidationReport report = validate_weighting(*alpha, n);

  std::ostringstream text;
  if (format == "csv") {
    text << "weighting,n,passed\n" << alpha->name() << ',' << n << ','
         << (report.passed ? "true" : "false") << '\n';
  } else {
    json doc;
    doc["command"] = "validate";
    doc["weighting"] = alpha->name();
    doc["n"] = n;
    doc["passed"] = report.passed;
    doc["checked_range"] = report.checked_range;
    doc["checked_symmetry"] = report.checked_symmetry;
    doc["checked_normalization"] = report.checked_normalization;
    if (report.passed) {
      doc["counterexample"] = nullptr;
    } else {
      doc["counterexample"] = report.counterexample;
    }
    text << doc.dump(2) << '\n';
  }
  emit(out, out_path, text.str());
  return report.passed ? kExitOk : kExitParse;
}

std::vector<std::uint64_t> parse_schedule(const std::string& schedule) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(schedule);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw config_error("empty sample schedule");
  return out;
}

int run_bench(const std::string& experiment, const std::string& distribution, int n,
              int n_min, int n_max, const std::string& weighting,
              const std::string& schedule, int trials, double epsilon, double beta,
              std::uint64_t seed, int repeats, int workers, const std::string& out_path,
              std::ostream& out) {
  ExperimentResult result;
  if (experiment == "error") {
    if (distribution.empty() || n <= 0)
      throw config_error("error experiment needs --distribution and --n");
    result = run_error_experiment({parse_distribution(distribution), n, seed}, weighting,
                                  parse_schedule(schedule), trials, beta);
  } else if (experiment == "timing") {
    if (distribution.empty() || n_min <= 0 || n_max <= 0)
      throw config_error("timing experiment needs --distribution, --n-min and --n-max");
    result = run_timing_experiment(parse_distribution(distribution), n_min, n_max,
                                   weighting, epsilon, beta, seed, repeats, workers);
  } else {
    throw config_error("unknown experiment '" + experiment + "' (expected error|timing)");
  }

  std::ostringstream csv;
  write_csv(csv, result.rows);
  if (out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw parse_error("cannot write to " + out_path);
    f << csv.str();
    json doc;
    doc["command"] = "bench";
    doc["experiment"] = experiment;
    doc["rows"] = result.rows.size();
    doc["out"] = out_path;
    out << doc.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended Shapley values for games with externalities"};
  app.require_subcommand(1);

  std::string weighting;
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 0;
  int workers = 1;

  GameSourceFlags exact_source;
  auto* cmd_exact = app.add_subcommand("exact", "Exact extended value of a game");
  exact_source.attach(cmd_exact);
  cmd_exact->add_option("--weighting", weighting, "Weighting name")->required();
  cmd_exact->add_option("--seed", seed, "Seed for generated games and axiom checks");
  cmd_exact->add_option("--output", format, "Output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_exact->add_option("--out", out_path, "Write the report to a file");

  GameSourceFlags approx_source;
  std::uint64_t samples = 0;
  double epsilon = 0.0, beta = 0.0;
  double min_contrib = 0.0, max_contrib = 0.0;
  auto* cmd_approx = app.add_subcommand("approx", "Monte Carlo estimate of the value");
  approx_source.attach(cmd_approx);
  cmd_approx->add_option("--weighting", weighting, "Weighting name")->required();
  cmd_approx->add_option("--samples", samples, "Number of samples");
  cmd_approx->add_option("--epsilon", epsilon, "Error target (with --beta)");
  cmd_approx->add_option("--beta", beta, "Failure probability (default 0.01)");
  auto* opt_min = cmd_approx->add_option("--min-contrib", min_contrib,
                                         "Lower bound on a single contribution");
  auto* opt_max = cmd_approx->add_option("--max-contrib", max_contrib,
                                         "Upper bound on a single contribution");
  cmd_approx->add_option("--seed", seed, "Master seed");
  cmd_approx->add_option("--workers", workers, "Sampling threads (does not change results)");
  cmd_approx->add_option("--output", format, "Output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_approx->add_option("--out", out_path, "Write the report to a file");

  double ss_epsilon = 0.0, ss_beta = 0.0;
  double ss_min = 0.0, ss_max = 0.0;
  std::string ss_distribution;
  int ss_n = 0;
  auto* cmd_ss = app.add_subcommand("sample-size", "Samples needed for an error target");
  cmd_ss->add_option("--epsilon", ss_epsilon, "Error target")->required();
  cmd_ss->add_option("--beta", ss_beta, "Failure probability")->required();
  auto* ss_opt_min = cmd_ss->add_option("--min-contrib", ss_min, "Lower contribution bound");
  auto* ss_opt_max = cmd_ss->add_option("--max-contrib", ss_max, "Upper contribution bound");
  cmd_ss->add_option("--distribution", ss_distribution,
                     "Use the bounds of a random game family");
  cmd_ss->add_option("--n", ss_n, "Player count for family bounds");
  cmd_ss->add_option("--output", format, "Output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_ss->add_option("--out", out_path, "Write the report to a file");

  int validate_n = 0;
  auto* cmd_validate = app.add_subcommand("validate", "Check the weighting axioms");
  cmd_validate->add_option("--weighting", weighting, "Weighting name")->required();
  cmd_validate->add_option("--n", validate_n, "Player count (exhaustive, n <= 6)")->required();
  cmd_validate->add_option("--output", format, "Output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_validate->add_option("--out", out_path, "Write the report to a file");

  std::string experiment = "error";
  std::string bench_distribution = "normal";
  int bench_n = 0, bench_n_min = 0, bench_n_max = 0;
  std::string schedule = "1000,4000,16000,65000";
  int trials = 3;
  double bench_epsilon = 0.1, bench_beta = 0.01;
  int repeats = 3;
  auto* cmd_bench = app.add_subcommand("bench", "Run an experiment and emit CSV");
  cmd_bench->add_option("--experiment", experiment, "error|timing");
  cmd_bench->add_option("--distribution", bench_distribution, "normal|uniform");
  cmd_bench->add_option("--n", bench_n, "Player count (error experiment)");
  cmd_bench->add_option("--n-min", bench_n_min, "Smallest n (timing experiment)");
  cmd_bench->add_option("--n-max", bench_n_max, "Largest n (timing experiment)");
  cmd_bench->add_option("--weighting", weighting, "Weighting name")->required();
  cmd_bench->add_option("--schedule", schedule, "Comma-separated sample counts");
  cmd_bench->add_option("--trials", trials, "Trials per sample count");
  cmd_bench->add_option("--epsilon", bench_epsilon, "Error target (timing experiment)");
  cmd_bench->add_option("--beta", bench_beta, "Failure probability");
  cmd_bench->add_option("--seed", seed, "Master seed");
  cmd_bench->add_option("--repeats", repeats, "Timed repetitions after warm-up");
  cmd_bench->add_option("--workers", workers, "Sampling threads");
  cmd_bench->add_option("--out", out_path, "CSV destination (summary goes to stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "E_USAGE " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*cmd_exact)
      return run_exact(exact_source, weighting, seed, format, out_path, out);
    if (*cmd_approx)
      return run_approx(approx_source, weighting, samples, epsilon, beta, min_contrib,
                        max_contrib, opt_min->count() > 0, opt_max->count() > 0, seed,
                        workers, format, out_path, out);
    if (*cmd_ss)
      return run_sample_size(ss_epsilon, ss_beta, ss_min, ss_max, ss_opt_min->count() > 0,
                             ss_opt_max->count() > 0, ss_distribution, ss_n, format,
                             out_path, out);
    if (*cmd_validate)
      return run_validate(weighting, validate_n, format, out_path, out);
    if (*cmd_bench)
      return run_bench(experiment, bench_distribution, bench_n, bench_n_min, bench_n_max,
                       weighting, schedule, trials, bench_epsilon, bench_beta, seed,
                       repeats, workers, out_path, out);
    err << "E_USAGE no subcommand given\n";
    return kExitUsage;
  } catch (const size_error& e) {
    err << "E_SIZE " << e.what() << "\n";
    return kExitSize;
  } catch (const parse_error& e) {
    err << "E_PARSE " << e.what() << "\n";
    return kExitParse;
  } catch (const config_error& e) {
    err << "E_USAGE " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "E_USAGE " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "E_ERROR " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pfg
