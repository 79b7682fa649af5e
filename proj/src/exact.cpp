#include "pfg/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "pfg/hu_yang_table.hpp"
#include "pfg/rng.hpp"

namespace pfg {

namespace {

void require_embedded(Coalition s, const Partition& p) {
  if (s.empty() || !p.has_block(s))
    throw std::invalid_argument("coalition is not a block of the partition");
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

PartitionFunctionGame SimpleGame::to_game(int n) const {
  if (anchor.coalition.empty())
    throw std::invalid_argument("simple game anchor must be a nonempty coalition");
  GameTable t(n);
  t.set(anchor.coalition, anchor.partition, scale);
  return PartitionFunctionGame::from_table(std::move(t));
}

double elementary_contribution(const PartitionFunctionGame& v, Player i, Coalition s,
                               const Partition& p, Coalition target) {
  require_embedded(s, p);
  if (!s.contains(i)) throw std::invalid_argument("player does not belong to the coalition");
  if (!target.empty() && (target == s || !p.has_block(target)))
    throw std::invalid_argument("invalid transfer target");
  const Partition after = p.transfer(i, target);
  return v.value(s, p) - v.value(s.without(i), after);
}

double alpha_marginal_contribution(const PartitionFunctionGame& v,
                                   const AlphaWeighting& alpha, Player i,
                                   Coalition s, const Partition& p) {
  require_embedded(s, p);
  if (!s.contains(i)) throw std::invalid_argument("player does not belong to the coalition");
  const Coalition left = s.without(i);
  const double before = v.value(s, p);
  double sum = 0.0;
  auto add_target = [&](Coalition target) {
    const Partition after = p.transfer(i, target);
    const double w = alpha.weight(i, left, after);
    if (w != 0.0) sum += w * (before - v.value(left, after));
  };
  add_target(Coalition());
  for (int b = 0; b < p.block_count(); ++b) {
    if (p.block(b) != s) add_target(p.block(b));
  }
  return sum;
}

double formation_probability(const AlphaWeighting& alpha, const Permutation& pi,
                             const Partition& p) {
  const int n = p.player_count();
  Partition state = Partition::grand(n);
  Coalition meeting = Coalition::full(n);
  std::uint32_t departed = 0;
  double pr = 1.0;
  for (int t = 0; t < n; ++t) {
    const Player a = pi.at(t);
    // a joins the already-departed part of its final block (or starts it).
    const Coalition target = p.block_of(a).intersect(Coalition::from_mask(departed));
    state = state.transfer(a, target);
    meeting = meeting.without(a);
    departed |= std::uint32_t{1} << a;
    pr *= alpha.weight(a, meeting, state);
    if (pr == 0.0) return 0.0;
  }
  return pr;
}

PayoffVector exact_value_by_permutation_sum(const PartitionFunctionGame& v,
                                            const AlphaWeighting& alpha) {
  const int n = v.player_count();
  if (n < 1 || n > 8)
    throw size_error("exact_value_by_permutation_sum enumerates n! * Bell(n); requires n <= 8");

  const auto partitions = enumerate_partitions(n);
  const double inv_nfact = 1.0 / factorial(n);
  PayoffVector phi(n, 0.0);

  std::vector<Player> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  // Reused per (pi, P): the meeting-point states along the leaving chain.
  std::vector<Partition> states(n + 1);
  std::vector<Coalition> meetings(n + 1);

  do {
    for (const Partition& p : partitions) {
      states[0] = Partition::grand(n);
      meetings[0] = Coalition::full(n);
      std::uint32_t departed = 0;
      double pr = 1.0;
      for (int t = 0; t < n && pr != 0.0; ++t) {
        const Player a = order[t];
        const Coalition target = p.block_of(a).intersect(Coalition::from_mask(departed));
        states[t + 1] = states[t].transfer(a, target);
        meetings[t + 1] = meetings[t].without(a);
        departed |= std::uint32_t{1} << a;
        pr *= alpha.weight(a, meetings[t + 1], states[t + 1]);
      }
      if (pr == 0.0) continue;
      double val_before = v.value(meetings[0], states[0]);
      for (int t = 0; t < n; ++t) {
        const double val_after = v.value(meetings[t + 1], states[t + 1]);
        phi[order[t]] += pr * (val_before - val_after);
        val_before = val_after;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));

  for (double& x : phi) x *= inv_nfact;
  return phi;
}

namespace {

// ---------------------------------------------------------------------------
// Fast exact path. For an embedded coalition (S, P), let W(S,P) be the sum
// over leaving orders of N\S of the chained formation probability, and
// W_last_j(S,P) the same sum restricted to orders in which j left last. The
// value decomposes into one sweep over embedded coalitions:
//
//   phi_i += (|S|-1)!/n! * W(S,P)       * v(S,P)   for i in S
//   phi_j -= |S|!/n!     * W_last_j(S,P) * v(S,P)   for j outside S
//
// (the negative sum is the positive side of the usual marginal-contribution
// form re-indexed by the state right after j's departure). For all built-in
// weightings both W and W_last depend only on the multiset of outside block
// sizes, so they are cached per size multiset.
// ---------------------------------------------------------------------------

struct FormationEntry {
  double w_pos = 0.0;
  // Indexed by the size of the block the last leaver sits in.
  std::array<double, kMaxPlayers + 1> w_last{};
};

std::uint64_t pack_sizes(const int* sizes, int count) {
  std::uint64_t key = static_cast<std::uint64_t>(count);
  for (int i = 0; i < count; ++i) key = (key << 5) | static_cast<std::uint64_t>(sizes[i]);
  return key;
}

// Sum over leaving orders of the Bolger chain, aggregated over block-fill
// states. Blocks of equal size are interchangeable, so a state is the count
// of blocks of each (size, placed) shape; each step multiplies by the number
// of (block, member) choices and by 1/(started blocks + 1).
FormationEntry bolger_entry(const int* sizes, int count, int k) {
  FormationEntry e;
  if (k == 0) {
    e.w_pos = 1.0;
    return e;
  }
  // Size classes, descending sizes.
  std::vector<int> class_size;
  std::vector<int> class_blocks;
  for (int i = 0; i < count; ++i) {
    if (!class_size.empty() && class_size.back() == sizes[i]) {
      ++class_blocks.back();
    } else {
      class_size.push_back(sizes[i]);
      class_blocks.push_back(1);
    }
  }
  const int classes = static_cast<int>(class_size.size());
  std::vector<int> offset(classes);
  int len = 0;
  for (int c = 0; c < classes; ++c) {
    offset[c] = len;
    len += class_size[c] + 1;  // slots for placed = 0..size
  }

  using State = std::vector<std::uint8_t>;
  State start(len, 0);
  for (int c = 0; c < classes; ++c) start[offset[c]] = static_cast<std::uint8_t>(class_blocks[c]);

  std::map<State, double> cur;
  cur.emplace(std::move(start), 1.0);
  std::vector<double> last_mass(classes, 0.0);

  for (int t = 0; t < k; ++t) {
    std::map<State, double> next;
    for (const auto& [st, f] : cur) {
      int started = 0;
      for (int c = 0; c < classes; ++c)
        for (int a = 1; a <= class_size[c]; ++a) started += st[offset[c] + a];
      const double w = 1.0 / (started + 1);
      for (int c = 0; c < classes; ++c) {
        for (int a = 0; a < class_size[c]; ++a) {
          const int m = st[offset[c] + a];
          if (m == 0) continue;
          const double val = f * m * (class_size[c] - a) * w;
          if (t == k - 1) {
            last_mass[c] += val;
          } else {
            State nx = st;
            --nx[offset[c] + a];
            ++nx[offset[c] + a + 1];
            next[std::move(nx)] += val;
          }
        }
      }
    }
    cur = std::move(next);
  }

  for (int c = 0; c < classes; ++c) {
    e.w_pos += last_mass[c];
    e.w_last[class_size[c]] = last_mass[c] / (static_cast<double>(class_blocks[c]) * class_size[c]);
  }
  return e;
}

class FormationWeights {
 public:
  FormationWeights(WeightingKind kind, int n) : kind_(kind), n_(n) {
    if (kind == WeightingKind::kHuYang) hy_.emplace(n);
  }

  // sizes: outside block sizes sorted descending; k their sum.
  const FormationEntry& lookup(const int* sizes, int count, int k) {
    const std::uint64_t key = pack_sizes(sizes, count);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, compute(sizes, count, k)).first->second;
  }

 private:
  FormationEntry compute(const int* sizes, int count, int k) const {
    FormationEntry e;
    if (k == 0) {
      e.w_pos = 1.0;
      return e;
    }
    const double kfact = factorial(k);
    const double km1fact = factorial(k - 1);
    switch (kind_) {
      case WeightingKind::kFree: {
        // Only all-singleton arrangements ever form, each chain has weight 1.
        const bool all_singletons = sizes[0] == 1;
        if (all_singletons) {
          e.w_pos = kfact;
          e.w_last[1] = km1fact;
        }
        break;
      }
      case WeightingKind::kFull: {
        // Everyone outside piles into one block; the chain has weight 1.
        if (count == 1) {
          e.w_pos = kfact;
          e.w_last[k] = km1fact;
        }
        break;
      }
      case WeightingKind::kMachoStadler: {
        // Chain probability prod (|T|-1)! / k! independent of the order.
        double q = 1.0;
        for (int i = 0; i < count; ++i) q *= factorial(sizes[i] - 1);
        q /= kfact;
        e.w_pos = kfact * q;
        for (int i = 0; i < count; ++i) e.w_last[sizes[i]] = km1fact * q;
        break;
      }
      case WeightingKind::kHuYang: {
        // Chain probability D(k, c) / Bell(n) for any order.
        const double q = static_cast<double>(hy_->cover_count(k, count)) /
                         static_cast<double>(hy_->cover_count(0, 0));
        e.w_pos = kfact * q;
        for (int i = 0; i < count; ++i) e.w_last[sizes[i]] = km1fact * q;
        break;
      }
      case WeightingKind::kBolger:
        return bolger_entry(sizes, count, k);
      case WeightingKind::kCustom:
        throw std::logic_error("no closed formation weights for custom weightings");
    }
    return e;
  }

  WeightingKind kind_;
  int n_;
  std::optional<HuYangTable> hy_;
  std::unordered_map<std::uint64_t, FormationEntry> cache_;
};

// Canonical full partition from the meeting block and the outside blocks
// (already canonically ordered among themselves).
Partition assemble_partition(int n, std::uint32_t meeting,
                             std::span<const std::uint32_t> outside) {
  std::array<Coalition, kMaxPlayers> blocks;
  int count = 0;
  if (meeting != 0) blocks[count++] = Coalition::from_mask(meeting);
  for (std::uint32_t m : outside) blocks[count++] = Coalition::from_mask(m);
  return Partition::from_blocks(n, std::span<const Coalition>(blocks.data(), count));
}

PayoffVector exact_value_builtin(const PartitionFunctionGame& v, const AlphaWeighting& alpha) {
  const int n = v.player_count();
  FormationWeights weights(alpha.sampler_kind(), n);
  const double nfact = factorial(n);
  std::array<double, kMaxPlayers + 1> fact{};
  for (int i = 0; i <= n; ++i) fact[i] = factorial(i);

  PayoffVector phi(n, 0.0);
  const std::uint32_t full = Coalition::full(n).mask();

  std::vector<Player> comp_players;
  comp_players.reserve(n);
  int sorted_sizes[kMaxPlayers];

  for (std::uint32_t s = 1; s <= full; ++s) {
    if ((s & full) != s) continue;
    const int s_size = std::popcount(s);
    const double pos_base = fact[s_size - 1] / nfact;
    const double neg_base = fact[s_size] / nfact;
    comp_players = detail::members_of_mask(full & ~s);
    const int k = static_cast<int>(comp_players.size());

    detail::partitions_of_players(
        std::span<const Player>(comp_players), [&](std::span<const std::uint32_t> blocks) {
          const int count = static_cast<int>(blocks.size());
          for (int b = 0; b < count; ++b) sorted_sizes[b] = std::popcount(blocks[b]);
          std::sort(sorted_sizes, sorted_sizes + count, std::greater<int>());
          const FormationEntry& entry = weights.lookup(sorted_sizes, count, k);
          if (entry.w_pos == 0.0) return;

          const Partition p = assemble_partition(n, s, blocks);
          const double val = v.value(Coalition::from_mask(s), p);
          if (val == 0.0) return;

          const double pos = pos_base * entry.w_pos * val;
          std::uint32_t members = s;
          while (members) {
            phi[std::countr_zero(members)] += pos;
            members &= members - 1;
          }
          for (std::uint32_t bm : blocks) {
            const double neg = neg_base * entry.w_last[std::popcount(bm)] * val;
            std::uint32_t js = bm;
            while (js) {
              phi[std::countr_zero(js)] -= neg;
              js &= js - 1;
            }
          }
        });
  }
  return phi;
}

// Generic path for custom weightings: a forward dynamic program over
// trajectory states (meeting coalition, arrangement of the departed). Each
// state carries the summed chain probability over the leaving orders that
// reach it; departures are expanded one transfer at a time, charging the
// leaver's negative term at the destination state.
PayoffVector exact_value_custom(const PartitionFunctionGame& v, const AlphaWeighting& alpha) {
  const int n = v.player_count();
  if (n > 10)
    throw size_error("exact_value for custom weightings requires n <= 10");
  const double nfact = factorial(n);
  std::array<double, kMaxPlayers + 1> fact{};
  for (int i = 0; i <= n; ++i) fact[i] = factorial(i);

  PayoffVector phi(n, 0.0);

  // State key: [meeting mask, departed block masks in canonical order].
  using Key = std::vector<std::uint32_t>;
  std::map<Key, double> level;
  level[{Coalition::full(n).mask()}] = 1.0;

  for (int departed = 0; departed < n; ++departed) {
    std::map<Key, double> next;
    for (const auto& [key, mass] : level) {
      const Coalition meeting = Coalition::from_mask(key[0]);
      std::vector<Coalition> blocks;
      blocks.reserve(key.size());
      blocks.push_back(meeting);
      for (std::size_t b = 1; b < key.size(); ++b)
        blocks.push_back(Coalition::from_mask(key[b]));
      const Partition state = Partition::from_blocks(n, blocks);

      const int s_size = meeting.size();
      const double val_here = v.value(meeting, state);
      if (val_here != 0.0) {
        const double pos = fact[s_size - 1] / nfact * mass * val_here;
        for (Player i : meeting.members()) phi[i] += pos;
      }

      for (Player i : meeting.members()) {
        const Coalition rest = meeting.without(i);
        auto expand = [&](Coalition target) {
          const Partition child = state.transfer(i, target);
          const double w = alpha.weight(i, rest, child);
          if (w == 0.0) return;
          const double flow = mass * w;
          const double val_child = v.value(rest, child);
          if (val_child != 0.0) phi[i] -= fact[rest.size()] / nfact * flow * val_child;
          if (rest.empty()) return;  // terminal: everyone has left
          Key ck;
          ck.push_back(rest.mask());
          for (int b = 0; b < child.block_count(); ++b) {
            if (child.block(b) != rest) ck.push_back(child.block(b).mask());
          }
          next[std::move(ck)] += flow;
        };
        expand(Coalition());
        for (int b = 0; b < state.block_count(); ++b) {
          if (state.block(b) != meeting) expand(state.block(b));
        }
      }
    }
    level = std::move(next);
  }
  return phi;
}

}  // namespace

PayoffVector exact_value(const PartitionFunctionGame& v, const AlphaWeighting& alpha) {
  const int n = v.player_count();
  if (n < 1) throw size_error("game must have at least one player");
  if (alpha.sampler_kind() == WeightingKind::kCustom) return exact_value_custom(v, alpha);
  if (n > kMaxEnumerationPlayers)
    throw size_error("exact_value enumerates embedded coalitions; requires n <= 12");
  return exact_value_builtin(v, alpha);
}

BasisRecursion::BasisRecursion(WeightingPtr alpha, int n) : alpha_(std::move(alpha)), n_(n) {
  if (n < 1 || n > 8) throw size_error("BasisRecursion requires n <= 8");
}

const PayoffVector& BasisRecursion::vector(const EmbeddedCoalition& anchor) {
  if (anchor.coalition.empty() || !anchor.partition.has_block(anchor.coalition))
    throw std::invalid_argument("anchor must be an embedded coalition");
  auto it = memo_.find(anchor);
  if (it != memo_.end()) return it->second;

  PayoffVector phi(n_, 0.0);
  const Coalition s = anchor.coalition;
  const Partition& p = anchor.partition;
  if (s.size() == n_) {
    // Efficiency and symmetry pin the grand-coalition game down directly.
    for (Player i = 0; i < n_; ++i) phi[i] = 1.0 / n_;
  } else {
    // Outside players: moving j into the anchor coalition produces a game
    // where j contributes nothing, which flips the sign of its payoff and
    // lifts the anchor one coalition size up.
    double outside_sum = 0.0;
    for (Player j = 0; j < n_; ++j) {
      if (s.contains(j)) continue;
      const double w = alpha_->weight(j, s, p);
      if (w != 0.0) {
        const Partition lifted = p.transfer(j, s);
        const PayoffVector& up = vector(EmbeddedCoalition{s.with(j), lifted});
        phi[j] = -w * up[j];
      }
      outside_sum += phi[j];
    }
    // Inside players split the balancing amount equally.
    const double share = -outside_sum / s.size();
    for (Player i : s.members()) phi[i] = share;
  }
  return memo_.emplace(anchor, std::move(phi)).first->second;
}

PayoffVector BasisRecursion::decompose(const PartitionFunctionGame& v) {
  PayoffVector out(n_, 0.0);
  for (const Partition& p : enumerate_partitions(n_)) {
    for (int b = 0; b < p.block_count(); ++b) {
      const double val = v.value(p.block(b), p);
      if (val == 0.0) continue;
      const PayoffVector& basis = vector(EmbeddedCoalition{p.block(b), p});
      for (Player i = 0; i < n_; ++i) out[i] += val * basis[i];
    }
  }
  return out;
}

PayoffVector basis_value(double c, const EmbeddedCoalition& anchor, WeightingPtr alpha) {
  BasisRecursion rec(alpha, anchor.partition.player_count());
  PayoffVector out = rec.vector(anchor);
  for (double& x : out) x *= c;
  return out;
}

PartitionFunctionGame null_player_game(int n, const AlphaWeighting& alpha, Player i,
                                       Coalition s, const Partition& p, double c) {
  if (s.contains(i)) throw std::invalid_argument("player must be outside the anchor coalition");
  require_embedded(s, p);
  GameTable t(n);
  const double w = alpha.weight(i, s, p);
  if (w != 0.0) t.set(s.with(i), p.transfer(i, s), c * w);
  t.set(s, p, c);
  return PartitionFunctionGame::from_table(std::move(t));
}

bool is_null_player(const PartitionFunctionGame& v, const AlphaWeighting& alpha, Player i) {
  const int n = v.player_count();
  if (n > 8) throw size_error("is_null_player is exhaustive; requires n <= 8");
  for (const Partition& p : enumerate_partitions(n)) {
    const Coalition s = p.block_of(i);
    if (std::abs(alpha_marginal_contribution(v, alpha, i, s, p)) > 1e-12) return false;
  }
  return true;
}

namespace {

PartitionFunctionGame random_table_game(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  GameTable t(n);
  for (const Partition& p : enumerate_partitions(n)) {
    for (int b = 0; b < p.block_count(); ++b) t.set(p.block(b), p, rng.symmetric());
  }
  return PartitionFunctionGame::from_table(std::move(t));
}

}  // namespace

AxiomReport check_axioms(const PartitionFunctionGame& v, const AlphaWeighting& alpha,
                         const ValueFunction& value, std::uint64_t seed, double tol) {
  const int n = v.player_count();
  if (n < 1 || n > 6) throw size_error("check_axioms is exhaustive; requires n <= 6");
  AxiomReport report;
  const PayoffVector phi = value(v, alpha);

  {
    const double total = v.value(Coalition::full(n), Partition::grand(n));
    double sum = 0.0;
    for (double x : phi) sum += x;
    if (std::abs(sum - total) > tol) {
      report.efficiency.passed = false;
      std::ostringstream os;
      os << "payoffs sum to " << sum << ", grand coalition is worth " << total;
      report.efficiency.detail = os.str();
    }
  }

  {
    std::vector<Player> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    bool ok = true;
    do {
      const Permutation pi(order);
      const PayoffVector permuted = value(permute_game(v, pi), alpha);
      for (Player i = 0; i < n && ok; ++i) {
        if (std::abs(permuted[i] - phi[pi.image(i)]) > tol) {
          ok = false;
          std::ostringstream os;
          os << "payoff of player " << (i + 1) << " changed under relabeling: " << permuted[i]
             << " vs " << phi[pi.image(i)];
          report.symmetry.detail = os.str();
        }
      }
    } while (ok && std::next_permutation(order.begin(), order.end()));
    report.symmetry.passed = ok;
  }

  {
    bool ok = true;
    for (int pair = 0; pair < 10 && ok; ++pair) {
      const auto v1 = random_table_game(n, mix_seed(seed, 2 * pair));
      const auto v2 = random_table_game(n, mix_seed(seed, 2 * pair + 1));
      const PayoffVector a = value(v1, alpha);
      const PayoffVector b = value(v2, alpha);
      const PayoffVector ab = value(v1 + v2, alpha);
      for (Player i = 0; i < n && ok; ++i) {
        if (std::abs(ab[i] - a[i] - b[i]) > tol) {
          ok = false;
          std::ostringstream os;
          os << "additivity off by " << (ab[i] - a[i] - b[i]) << " for player " << (i + 1);
          report.additivity.detail = os.str();
        }
      }
    }
    report.additivity.passed = ok;
  }

  {
    // Constructed games in which one player provably contributes nothing.
    bool ok = true;
    SplitMix64 rng(mix_seed(seed, 0xA11));
    const auto partitions = enumerate_partitions(n);
    for (int trial = 0; trial < 8 && ok; ++trial) {
      const Partition& p = partitions[rng.bounded(partitions.size())];
      const Coalition s = p.block(static_cast<int>(rng.bounded(p.block_count())));
      if (s.size() == n) continue;
      Player i = 0;
      do {
        i = static_cast<Player>(rng.bounded(n));
      } while (s.contains(i));
      const double c = 1.0 + rng.uniform01();
      const auto game = null_player_game(n, alpha, i, s, p, c);
      if (!is_null_player(game, alpha, i)) {
        ok = false;
        report.null_player.detail = "constructed game failed the premise check";
        break;
      }
      const PayoffVector np = value(game, alpha);
      if (std::abs(np[i]) > tol) {
        ok = false;
        std::ostringstream os;
        os << "null player " << (i + 1) << " received " << np[i];
        report.null_player.detail = os.str();
      }
    }
    report.null_player.passed = ok;
  }

  return report;
}

}  // namespace pfg
