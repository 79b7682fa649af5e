#include "pfg/hu_yang_table.hpp"

namespace pfg {

HuYangTable::HuYangTable(int n) : n_(n) {
  if (n < 1 || n > kMaxPlayers)
    throw size_error("HuYangTable supports 1 <= n <= 20 (exact 64-bit counts)");
  d_.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  for (int c = 0; c <= n; ++c) d_[idx(n, c)] = 1;
  for (int k = n - 1; k >= 0; --k) {
    for (int c = k; c >= 0; --c) {
      d_[idx(k, c)] = static_cast<std::uint64_t>(c) * d_[idx(k + 1, c)] + d_[idx(k + 1, c + 1)];
    }
  }
}

double HuYangTable::new_block_prob(int k, int c) const {
  return static_cast<double>(cover_count(k + 1, c + 1)) / static_cast<double>(cover_count(k, c));
}

double HuYangTable::join_block_prob(int k, int c) const {
  return static_cast<double>(cover_count(k + 1, c)) / static_cast<double>(cover_count(k, c));
}

}  // namespace pfg
