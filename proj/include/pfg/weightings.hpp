#ifndef PFG_WEIGHTINGS_HPP
#define PFG_WEIGHTINGS_HPP

#include <memory>
#include <string>
#include <string_view>

#include "pfg/core.hpp"
#include "pfg/hu_yang_table.hpp"

namespace pfg {

// Which bespoke partition sampler matches the weighting. Custom weightings
// fall back to generic sequential sampling driven by the weights themselves.
enum class WeightingKind {
  kFree,           // leaver always stands alone; singleton partition
  kFull,           // leavers pile into one block; grand coalition
  kBolger,         // uniform over join-or-new options; order-dependent
  kMachoStadler,   // size-proportional joins; cycles of a random permutation
  kHuYang,         // uniform over all partitions; cover-count placement
  kCustom,
};

// A transfer weighting: the probability that a player who just left a
// coalition ends up where it is. weight(i, left, after) reads the state
// right after the transfer: `after` is the full partition, i sits in one of
// its blocks, and `left` is the block the player departed from with i
// already removed (empty once the last player leaves). Weights are
// nonnegative, do not depend on player names, and over all admissible
// targets of one departure they sum to 1.
class AlphaWeighting {
 public:
  virtual ~AlphaWeighting() = default;

  const std::string& name() const { return name_; }
  int player_count() const { return n_; }
  WeightingKind sampler_kind() const { return kind_; }

  virtual double weight(Player i, Coalition left, const Partition& after) const = 0;

 protected:
  AlphaWeighting(std::string name, WeightingKind kind, int n)
      : name_(std::move(name)), kind_(kind), n_(n) {}

 private:
  std::string name_;
  WeightingKind kind_;
  int n_;
};

using WeightingPtr = std::shared_ptr<const AlphaWeighting>;

// The externality-free weighting: all mass on the leaver becoming a
// singleton (Pham Do & Norde).
WeightingPtr alpha_free(int n);

// The full-of-externalities weighting: uniform over the outcomes where the
// leaver does not stand alone; when a new block is the only option (first
// leaver) it gets the whole mass (McQuillin / Skibski).
WeightingPtr alpha_full(int n);

// Every admissible transfer equally likely (Bolger).
WeightingPtr alpha_bolger(int n);

// Weight proportional to the size of the coalition joined, 1 for a new
// block; the Chinese-restaurant process (Macho-Stadler et al.).
WeightingPtr alpha_macho_stadler(int n);

// Cover-count ratios making every partition equally likely (Hu & Yang).
WeightingPtr alpha_hu_yang(int n);

// Lookup by name. Accepts: free | full | bolger | macho-stadler | hu-yang,
// plus the literature aliases pham-do-norde -> free, mcquillin -> full.
WeightingPtr make_weighting(std::string_view name, int n);

const std::vector<std::string>& weighting_names();

struct ValidationReport {
  bool passed = true;
  std::string counterexample;        // empty when passed
  long checked_range = 0;            // (i, state) weight evaluations
  long checked_symmetry = 0;         // (i, state, permutation) triples
  long checked_normalization = 0;    // (i, S, P) departure fans

  explicit operator bool() const { return passed; }
};

// Exhaustively verifies the weighting axioms for n players: weights lie in
// [0,1]; weights are invariant under every relabeling of players; the
// weights of all admissible transfers out of each embedded coalition sum to
// one. Reports the first violation instead of throwing. n <= 6.
ValidationReport validate_weighting(const AlphaWeighting& alpha, int n);

}  // namespace pfg

#endif  // PFG_WEIGHTINGS_HPP
