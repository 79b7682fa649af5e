#include "pfg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace pfg {

Permutation sample_permutation(SamplerState& state) {
  const int n = state.player_count();
  std::vector<Player> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int j = n - 1; j >= 1; --j) {
    const int k = static_cast<int>(state.rng.bounded(static_cast<std::uint64_t>(j) + 1));
    std::swap(order[j], order[k]);
  }
  return Permutation(std::move(order));
}

namespace {

Partition blocks_to_partition(int n, std::span<const std::uint32_t> blocks) {
  std::vector<Coalition> bs;
  bs.reserve(blocks.size());
  for (std::uint32_t m : blocks)
    if (m != 0) bs.push_back(Coalition::from_mask(m));
  return Partition::from_blocks(n, bs);
}

Partition sample_bolger(SamplerState& state, const Permutation& leave_order) {
  const int n = state.player_count();
  std::vector<std::uint32_t> blocks;
  blocks.reserve(n);
  for (int t = 0; t < n; ++t) {
    const std::uint32_t bit = std::uint32_t{1} << leave_order.at(t);
    const std::uint64_t pick = state.rng.bounded(blocks.size() + 1);
    if (pick == blocks.size()) {
      blocks.push_back(bit);
    } else {
      blocks[pick] |= bit;
    }
  }
  return blocks_to_partition(n, blocks);
}

Partition sample_cycles(SamplerState& state) {
  const int n = state.player_count();
  // Cycle blocks of a uniform permutation match the size-proportional
  // departure chain for any leaving order.
  std::vector<Player> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  for (int j = n - 1; j >= 1; --j) {
    const int k = static_cast<int>(state.rng.bounded(static_cast<std::uint64_t>(j) + 1));
    std::swap(sigma[j], sigma[k]);
  }
  std::vector<std::uint32_t> blocks;
  std::uint32_t visited = 0;
  for (int start = 0; start < n; ++start) {
    if ((visited >> start) & 1u) continue;
    std::uint32_t cycle = 0;
    int cur = start;
    while (!((cycle >> cur) & 1u)) {
      cycle |= std::uint32_t{1} << cur;
      cur = sigma[cur];
    }
    visited |= cycle;
    blocks.push_back(cycle);
  }
  return blocks_to_partition(n, blocks);
}

Partition sample_hu_yang(SamplerState& state, const Permutation& leave_order) {
  const int n = state.player_count();
  const HuYangTable& table = *state.hu_yang;
  std::vector<std::uint32_t> blocks;
  blocks.reserve(n);
  for (int k = 0; k < n; ++k) {
    const std::uint32_t bit = std::uint32_t{1} << leave_order.at(k);
    const int c = static_cast<int>(blocks.size());
    if (state.rng.uniform01() < table.new_block_prob(k, c)) {
      blocks.push_back(bit);
    } else {
      blocks[state.rng.bounded(c)] |= bit;
    }
  }
  return blocks_to_partition(n, blocks);
}

// Sequential simulation straight from the weights: at every departure,
// enumerate the admissible targets and draw one with its alpha weight.
Partition sample_generic(SamplerState& state, const Permutation& leave_order) {
  const int n = state.player_count();
  const AlphaWeighting& alpha = *state.weighting;
  Partition current = Partition::grand(n);
  Coalition meeting = Coalition::full(n);
  for (int t = 0; t < n; ++t) {
    const Player a = leave_order.at(t);
    const Coalition rest = meeting.without(a);
    std::vector<Partition> options;
    std::vector<double> weights;
    auto consider = [&](Coalition target) {
      Partition after = current.transfer(a, target);
      const double w = alpha.weight(a, rest, after);
      if (w > 0.0) {
        options.push_back(std::move(after));
        weights.push_back(w);
      }
    };
    consider(Coalition());
    for (int b = 0; b < current.block_count(); ++b) {
      if (current.block(b) != meeting) consider(current.block(b));
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (options.empty() || total <= 0.0)
      throw config_error("weighting assigns no admissible transfer at some state");
    double u = state.rng.uniform01() * total;
    std::size_t pick = 0;
    for (; pick + 1 < options.size(); ++pick) {
      u -= weights[pick];
      if (u <= 0.0) break;
    }
    current = options[pick];
    meeting = rest;
  }
  return current;
}

}  // namespace

Partition sample_partition(SamplerState& state, const Permutation& leave_order) {
  const int n = state.player_count();
  switch (state.weighting->sampler_kind()) {
    case WeightingKind::kFree:
      return Partition::singletons(n);
    case WeightingKind::kFull:
      return Partition::grand(n);
    case WeightingKind::kBolger:
      return sample_bolger(state, leave_order);
    case WeightingKind::kMachoStadler:
      return sample_cycles(state);
    case WeightingKind::kHuYang:
      if (!state.hu_yang) state.hu_yang = std::make_shared<HuYangTable>(n);
      return sample_hu_yang(state, leave_order);
    case WeightingKind::kCustom:
      return sample_generic(state, leave_order);
  }
  throw config_error("unsupported sampler kind");
}

double ApproxResult::standard_error(Player i) const {
  return samples > 0 ? std::sqrt(variance[i] / static_cast<double>(samples)) : 0.0;
}

namespace {

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> sumsq;

  explicit Accumulator(int n) : sum(n, 0.0), sumsq(n, 0.0) {}
};

// One sample: draw (pi, P), then unwind P by returning players to the
// meeting point in reverse leaving order, crediting each returner with the
// change of the meeting coalition's value.
void run_one_sample(const PartitionFunctionGame& v, WeightingPtr alpha,
                    std::shared_ptr<const HuYangTable> table, std::uint64_t stream_seed,
                    Accumulator& acc) {
  const int n = v.player_count();
  SamplerState state(alpha, stream_seed, std::move(table));
  const Permutation pi = sample_permutation(state);
  const Partition p = sample_partition(state, pi);

  // Outside arrangement of the players that have not yet returned.
  std::array<std::uint32_t, kMaxPlayers> outside{};
  std::array<int, kMaxPlayers> block_of{};
  const int blocks = p.block_count();
  for (int b = 0; b < blocks; ++b) {
    outside[b] = p.block(b).mask();
    std::uint32_t m = outside[b];
    while (m) {
      block_of[std::countr_zero(m)] = b;
      m &= m - 1;
    }
  }

  std::array<Coalition, kMaxPlayers + 1> parts;
  std::uint32_t meeting = 0;
  double prev = 0.0;  // value of the empty meeting point
  for (int t = n - 1; t >= 0; --t) {
    const Player a = pi.at(t);
    outside[block_of[a]] &= ~(std::uint32_t{1} << a);
    meeting |= std::uint32_t{1} << a;
    int count = 0;
    parts[count++] = Coalition::from_mask(meeting);
    for (int b = 0; b < blocks; ++b)
      if (outside[b] != 0) parts[count++] = Coalition::from_mask(outside[b]);
    const Partition arrangement =
        Partition::from_blocks(n, std::span<const Coalition>(parts.data(), count));
    const double cur = v.value(Coalition::from_mask(meeting), arrangement);
    const double delta = cur - prev;
    acc.sum[a] += delta;
    acc.sumsq[a] += delta * delta;
    prev = cur;
  }
}

}  // namespace

ApproxResult approximate(const PartitionFunctionGame& v, WeightingPtr alpha,
                         std::uint64_t samples, std::uint64_t seed, int workers) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int n = v.player_count();
  if (n != alpha->player_count())
    throw std::invalid_argument("weighting was built for a different player count");

  std::shared_ptr<const HuYangTable> table;
  if (alpha->sampler_kind() == WeightingKind::kHuYang)
    table = std::make_shared<HuYangTable>(n);

  // Fixed-size chunks are accumulated independently and merged in index
  // order, so the result depends only on (seed, samples), not on the number
  // of workers or their schedule.
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunk_count = (samples + kChunk - 1) / kChunk;
  std::vector<Accumulator> chunks(chunk_count, Accumulator(n));

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(chunk_count)));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      const std::uint64_t begin = c * kChunk;
      const std::uint64_t end = std::min(samples, begin + kChunk);
      for (std::uint64_t s = begin; s < end; ++s) {
        run_one_sample(v, alpha, table, mix_seed(seed, s), chunks[c]);
      }
    }
  };
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ApproxResult result;
  result.samples = samples;
  result.estimate.assign(n, 0.0);
  result.variance.assign(n, 0.0);
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  for (const Accumulator& acc : chunks) {
    for (int i = 0; i < n; ++i) {
      sum[i] += acc.sum[i];
      sumsq[i] += acc.sumsq[i];
    }
  }
  const double m = static_cast<double>(samples);
  for (int i = 0; i < n; ++i) {
    result.estimate[i] = sum[i] / m;
    result.variance[i] =
        samples > 1 ? std::max(0.0, (sumsq[i] - sum[i] * sum[i] / m) / (m - 1.0)) : 0.0;
  }
  return result;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton step against the exact CDF tightens the approximation to
  // near machine precision.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

std::uint64_t required_samples(const ErrorSpec& spec) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(spec.beta > 0.0 && spec.beta < 1.0))
    throw std::invalid_argument("beta must lie in (0,1)");
  if (spec.min_contribution > spec.max_contribution)
    throw std::invalid_argument("contribution bounds are inverted");
  const double half_range = (spec.max_contribution - spec.min_contribution) / 2.0;
  const double sigma_sq = half_range * half_range;
  const double z = normal_quantile(1.0 - spec.beta / 2.0);
  const double m = std::ceil(sigma_sq / (spec.epsilon * spec.epsilon) * z * z);
  return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
}

double error_bound_for_samples(std::uint64_t samples, double beta,
                               double min_contribution, double max_contribution) {
  const double half_range = (max_contribution - min_contribution) / 2.0;
  const double z = normal_quantile(1.0 - beta / 2.0);
  return z * half_range / std::sqrt(static_cast<double>(samples));
}

GameDistribution parse_distribution(std::string_view name) {
  if (name == "normal") return GameDistribution::kNormal;
  if (name == "uniform") return GameDistribution::kUniform;
  throw config_error("unknown distribution '" + std::string(name) +
                     "' (expected normal|uniform)");
}

std::string_view distribution_name(GameDistribution d) {
  return d == GameDistribution::kNormal ? "normal" : "uniform";
}

ContributionBounds contribution_bounds(GameDistribution distribution, int n) {
  if (n < 1 || n > kMaxPlayers) throw size_error("contribution bounds require 1 <= n <= 20");
  if (distribution == GameDistribution::kNormal)
    return {1.3 - 0.6 * n, 0.6 * n + 0.7};
  return {static_cast<double>(-n + 1), static_cast<double>(n)};
}

}  // namespace pfg
