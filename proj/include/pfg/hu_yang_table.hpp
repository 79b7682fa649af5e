#ifndef PFG_HU_YANG_TABLE_HPP
#define PFG_HU_YANG_TABLE_HPP

#include <cstdint>
#include <vector>

#include "pfg/core.hpp"

namespace pfg {

// Cover counts for sequential uniform-partition sampling. D(k, c) is the
// number of set partitions of n players that extend a partial partition of
// k players arranged in c blocks ("extend" = every partial block is
// contained in some final block). Satisfies
//
//   D(n, c) = 1,   D(k, c) = c * D(k+1, c) + D(k+1, c+1),
//
// and D(0, 0) = Bell(n). Placing player k+1 into a fixed existing block has
// probability D(k+1, c) / D(k, c); opening a new block has probability
// D(k+1, c+1) / D(k, c), which never drops below 1/n, so the sequential
// sampler is numerically safe. Built once in O(n^2).
class HuYangTable {
 public:
  explicit HuYangTable(int n);

  int player_count() const { return n_; }

  // D(k, c) for 0 <= c <= k <= n.
  std::uint64_t cover_count(int k, int c) const { return d_[idx(k, c)]; }

  // Probability that the (k+1)-th placed player opens a new block, given k
  // players already sit in c blocks.
  double new_block_prob(int k, int c) const;

  // Probability of joining one specific existing block in the same state.
  double join_block_prob(int k, int c) const;

 private:
  int n_;
  std::vector<std::uint64_t> d_;

  int idx(int k, int c) const { return k * (n_ + 1) + c; }
};

inline HuYangTable hu_yang_table(int n) { return HuYangTable(n); }

}  // namespace pfg

#endif  // PFG_HU_YANG_TABLE_HPP
