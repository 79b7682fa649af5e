#include "pfg/weightings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pfg {

namespace {

// Blocks of `after` other than the vacated block and the block holding i.
// This is the number of pre-transfer outside coalitions minus the one the
// player interacted with; every weighting below is a function of it, of
// whether i stands alone, and of block sizes.
int other_block_count(Player i, Coalition left, const Partition& after) {
  int d = 0;
  const std::uint32_t ibit = std::uint32_t{1} << i;
  for (int b = 0; b < after.block_count(); ++b) {
    const std::uint32_t m = after.block(b).mask();
    if (m & ibit) continue;
    if (!left.empty() && m == left.mask()) continue;
    ++d;
  }
  return d;
}

class FreeWeighting final : public AlphaWeighting {
 public:
  explicit FreeWeighting(int n) : AlphaWeighting("free", WeightingKind::kFree, n) {}

  double weight(Player i, Coalition, const Partition& after) const override {
    return after.block_of(i).size() == 1 ? 1.0 : 0.0;
  }
};

class FullWeighting final : public AlphaWeighting {
 public:
  explicit FullWeighting(int n) : AlphaWeighting("full", WeightingKind::kFull, n) {}

  double weight(Player i, Coalition left, const Partition& after) const override {
    const int d = other_block_count(i, left, after);
    if (after.block_of(i).size() == 1) {
      // Standing alone carries weight only when it was the only option,
      // i.e. no coalition existed outside the departed one.
      return d == 0 ? 1.0 : 0.0;
    }
    return 1.0 / (d + 1);
  }
};

class BolgerWeighting final : public AlphaWeighting {
 public:
  explicit BolgerWeighting(int n) : AlphaWeighting("bolger", WeightingKind::kBolger, n) {}

  double weight(Player i, Coalition left, const Partition& after) const override {
    const int d = other_block_count(i, left, after);
    // Options at departure time: each pre-existing outside block plus a new
    // one. If i joined a block, that block existed too.
    const int pre_existing = after.block_of(i).size() == 1 ? d : d + 1;
    return 1.0 / (pre_existing + 1);
  }
};

class MachoStadlerWeighting final : public AlphaWeighting {
 public:
  explicit MachoStadlerWeighting(int n)
      : AlphaWeighting("macho-stadler", WeightingKind::kMachoStadler, n) {}

  double weight(Player i, Coalition left, const Partition& after) const override {
    const int departed = after.player_count() - left.size();  // includes i
    const int b = after.block_of(i).size();
    return (b > 1 ? static_cast<double>(b - 1) : 1.0) / departed;
  }
};

class HuYangWeighting final : public AlphaWeighting {
 public:
  explicit HuYangWeighting(int n)
      : AlphaWeighting("hu-yang", WeightingKind::kHuYang, n), table_(n) {}

  double weight(Player i, Coalition left, const Partition& after) const override {
    const int departed = after.player_count() - left.size();  // includes i
    int c_post = after.block_count() - (left.empty() ? 0 : 1);
    int c_pre = c_post - (after.block_of(i).size() == 1 ? 1 : 0);
    return static_cast<double>(table_.cover_count(departed, c_post)) /
           static_cast<double>(table_.cover_count(departed - 1, c_pre));
  }

  const HuYangTable& table() const { return table_; }

 private:
  HuYangTable table_;
};

void check_n(int n) {
  if (n < 1 || n > kMaxPlayers) throw size_error("weighting requires 1 <= n <= 20");
}

}  // namespace

WeightingPtr alpha_free(int n) {
  check_n(n);
  return std::make_shared<FreeWeighting>(n);
}

WeightingPtr alpha_full(int n) {
  check_n(n);
  return std::make_shared<FullWeighting>(n);
}

WeightingPtr alpha_bolger(int n) {
  check_n(n);
  return std::make_shared<BolgerWeighting>(n);
}

WeightingPtr alpha_macho_stadler(int n) {
  check_n(n);
  return std::make_shared<MachoStadlerWeighting>(n);
}

WeightingPtr alpha_hu_yang(int n) {
  check_n(n);
  return std::make_shared<HuYangWeighting>(n);
}

WeightingPtr make_weighting(std::string_view name, int n) {
  if (name == "free" || name == "pham-do-norde") return alpha_free(n);
  if (name == "full" || name == "mcquillin") return alpha_full(n);
  if (name == "bolger") return alpha_bolger(n);
  if (name == "macho-stadler") return alpha_macho_stadler(n);
  if (name == "hu-yang") return alpha_hu_yang(n);
  throw config_error("unknown weighting '" + std::string(name) +
                     "' (expected free|full|bolger|macho-stadler|hu-yang)");
}

const std::vector<std::string>& weighting_names() {
  static const std::vector<std::string> names{"free", "full", "bolger",
                                              "macho-stadler", "hu-yang"};
  return names;
}

namespace {

std::string describe_state(Player i, Coalition left, const Partition& after) {
  std::ostringstream os;
  os << "i=" << (i + 1) << " left=" << left.to_string() << " P=" << after.to_string();
  return os.str();
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Player> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<Permutation> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace

ValidationReport validate_weighting(const AlphaWeighting& alpha, int n) {
  if (n < 1 || n > 6) throw size_error("validate_weighting is exhaustive; requires n <= 6");
  ValidationReport report;
  const auto partitions = enumerate_partitions(n);
  const auto perms = all_permutations(n);

  // Post-transfer states: i in some block of P, `left` any other block or
  // the empty coalition. Range and symmetry are checked on all of them.
  for (const Partition& p : partitions) {
    for (Player i = 0; i < n; ++i) {
      const Coalition iblock = p.block_of(i);
      for (int lb = -1; lb < p.block_count(); ++lb) {
        const Coalition left = lb < 0 ? Coalition() : p.block(lb);
        if (!left.empty() && left == iblock) continue;
        const double w = alpha.weight(i, left, p);
        ++report.checked_range;
        if (!(w >= 0.0 && w <= 1.0) || !std::isfinite(w)) {
          report.passed = false;
          std::ostringstream os;
          os << "weight " << w << " outside [0,1] at " << describe_state(i, left, p);
          report.counterexample = os.str();
          return report;
        }
        for (const Permutation& pi : perms) {
          const double wp = alpha.weight(pi.image(i), permute(left, pi), permute(p, pi));
          ++report.checked_symmetry;
          if (std::abs(w - wp) > 1e-12) {
            report.passed = false;
            std::ostringstream os;
            os << "symmetry broken at " << describe_state(i, left, p) << ": " << w
               << " vs " << wp << " after relabeling";
            report.counterexample = os.str();
            return report;
          }
        }
      }
    }
  }

  // Normalization: the admissible transfers of i out of (S, P) are the other
  // blocks of P plus a fresh block; their weights must sum to one.
  for (const Partition& p : partitions) {
    for (int sb = 0; sb < p.block_count(); ++sb) {
      const Coalition s = p.block(sb);
      for (Player i : s.members()) {
        const Coalition left = s.without(i);
        double sum = alpha.weight(i, left, p.transfer(i, Coalition()));
        for (int tb = 0; tb < p.block_count(); ++tb) {
          if (tb == sb) continue;
          sum += alpha.weight(i, left, p.transfer(i, p.block(tb)));
        }
        ++report.checked_normalization;
        if (std::abs(sum - 1.0) > 1e-9) {
          report.passed = false;
          std::ostringstream os;
          os << "transfer weights from (S=" << s.to_string() << ", P=" << p.to_string()
             << ") for i=" << (i + 1) << " sum to " << sum;
          report.counterexample = os.str();
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace pfg
