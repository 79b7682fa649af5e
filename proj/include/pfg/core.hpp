#ifndef PFG_CORE_HPP
#define PFG_CORE_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

// Players, coalitions, partitions and partition-function games.
//
// Players are 0-indexed throughout the library; user-facing layers (CLI,
// game files, printing) translate to 1-indexed labels. A coalition is a
// bitmask over players. A partition stores its nonempty blocks in canonical
// order: ascending by smallest member. The empty coalition is representable
// because it is needed both as a "create a new block" transfer target and as
// the meeting-point coalition once every player has left.

namespace pfg {

inline constexpr int kMaxPlayers = 20;          // one machine word of bitmask
inline constexpr int kMaxEnumerationPlayers = 12;  // Bell(12) ~ 4.2M

using Player = int;

// Thrown when an input exceeds a documented size cap.
class size_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown on malformed configuration (unknown weighting name, bad flags).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when parsing an external file fails validation.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Coalition {
 public:
  constexpr Coalition() = default;

  static constexpr Coalition from_mask(std::uint32_t mask) {
    Coalition c;
    c.mask_ = mask;
    return c;
  }

  static Coalition of(std::initializer_list<Player> players) {
    std::uint32_t m = 0;
    for (Player p : players) m |= std::uint32_t{1} << p;
    return from_mask(m);
  }

  // The full player set {0, ..., n-1}.
  static constexpr Coalition full(int n) {
    return from_mask(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(Player i) const { return (mask_ >> i) & 1u; }
  constexpr Coalition with(Player i) const { return from_mask(mask_ | (std::uint32_t{1} << i)); }
  constexpr Coalition without(Player i) const { return from_mask(mask_ & ~(std::uint32_t{1} << i)); }
  constexpr bool subset_of(Coalition o) const { return (mask_ & ~o.mask_) == 0; }
  constexpr bool intersects(Coalition o) const { return (mask_ & o.mask_) != 0; }
  constexpr Coalition unite(Coalition o) const { return from_mask(mask_ | o.mask_); }
  constexpr Coalition intersect(Coalition o) const { return from_mask(mask_ & o.mask_); }
  constexpr Coalition minus(Coalition o) const { return from_mask(mask_ & ~o.mask_); }

  // Smallest member; coalition must be nonempty.
  Player lowest() const;
  std::vector<Player> members() const;

  friend constexpr bool operator==(Coalition a, Coalition b) { return a.mask_ == b.mask_; }
  friend constexpr bool operator!=(Coalition a, Coalition b) { return a.mask_ != b.mask_; }
  friend constexpr bool operator<(Coalition a, Coalition b) { return a.mask_ < b.mask_; }

  // 1-indexed, e.g. "{1,3}"; "{}" for the empty coalition.
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

// A permutation of {0..n-1}, read both as a leaving order
// (at(0) leaves first) and as a bijection on players.
class Permutation {
 public:
  explicit Permutation(std::vector<Player> order);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  Player at(int pos) const { return order_[pos]; }
  int position_of(Player i) const { return pos_[i]; }
  Player image(Player i) const { return order_[i]; }
  std::span<const Player> order() const { return order_; }
  Permutation inverse() const;

  // Players appearing after i in the order (C_i in the leaving story:
  // those still at the meeting point when i has left).
  Coalition trailing(Player i) const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<Player> order_;
  std::vector<int> pos_;
};

// A set partition of {0..n-1}. Blocks are nonempty, pairwise disjoint and
// stored ascending by smallest member, which makes the representation
// canonical: two equal partitions compare equal block by block.
class Partition {
 public:
  Partition() = default;

  static Partition singletons(int n);
  static Partition grand(int n);
  // Validates disjointness/coverage, drops nothing, sorts canonically.
  static Partition from_blocks(int n, std::span<const Coalition> blocks);
  static Partition from_blocks(int n, std::initializer_list<Coalition> blocks);

  int player_count() const { return n_; }
  int block_count() const { return count_; }
  Coalition block(int idx) const { return Coalition::from_mask(blocks_[idx]); }
  bool has_block(Coalition c) const;
  Coalition block_of(Player i) const;
  int block_index_of(Player i) const;

  // tau_i^T: move player i from its block into target T. T must be an
  // existing block not containing i, or the empty coalition to start a new
  // singleton block. The vacated block is dropped if it becomes empty.
  Partition transfer(Player i, Coalition target) const;

  // P_[S]: pull every member of S out of its block and regroup them as one
  // new block; the traces of the old blocks stay behind. S may be empty
  // (identity) and need not respect block boundaries.
  Partition isolate(Coalition s) const;

  friend bool operator==(const Partition& a, const Partition& b);
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

  std::size_t hash() const;
  std::string to_string() const;  // 1-indexed, e.g. "{{1,2},{3}}"

 private:
  int n_ = 0;
  int count_ = 0;
  std::array<std::uint32_t, kMaxPlayers> blocks_{};

  void insert_block_sorted(std::uint32_t mask);
  friend class PartitionBuilder;
};

// A coalition together with the partition it is embedded in. The coalition
// is either a block of the partition or empty (the "everyone has left"
// state used when unwinding a sample).
struct EmbeddedCoalition {
  Coalition coalition;
  Partition partition;

  bool valid() const {
    return coalition.empty() || partition.has_block(coalition);
  }
  friend bool operator==(const EmbeddedCoalition& a, const EmbeddedCoalition& b) {
    return a.coalition == b.coalition && a.partition == b.partition;
  }
};

struct EmbeddedCoalitionHash {
  std::size_t operator()(const EmbeddedCoalition& ec) const {
    return ec.partition.hash() * 1000003u + ec.coalition.mask();
  }
};

using PayoffVector = std::vector<double>;

// Sparse explicit table of embedded-coalition values; unspecified entries
// are zero. Used by file-backed games and test fixtures.
class GameTable {
 public:
  explicit GameTable(int n) : n_(n) {}

  int player_count() const { return n_; }
  // Returns false if (s, p) was already present (duplicates are an error
  // for file input; the caller decides).
  bool set(Coalition s, const Partition& p, double value);
  double get(Coalition s, const Partition& p) const;
  std::size_t entry_count() const { return values_.size(); }

  // Entries sorted by (coalition mask, block masks) for stable output.
  std::vector<std::pair<EmbeddedCoalition, double>> sorted_entries() const;

 private:
  int n_ = 0;
  std::unordered_map<EmbeddedCoalition, double, EmbeddedCoalitionHash> values_;
};

// A partition-function game: a real value for every embedded coalition.
// The empty coalition is worth 0 in every arrangement by construction.
class PartitionFunctionGame {
 public:
  using Evaluator = std::function<double(Coalition, const Partition&)>;

  PartitionFunctionGame(int n, Evaluator eval)
      : n_(n), eval_(std::move(eval)) {}

  static PartitionFunctionGame from_table(GameTable table);
  // Game whose value ignores the arrangement of outside players.
  static PartitionFunctionGame without_externalities(
      int n, std::function<double(Coalition)> v_hat);
  static PartitionFunctionGame zero(int n);

  int player_count() const { return n_; }

  double value(Coalition s, const Partition& p) const {
    if (s.empty()) return 0.0;
    return eval_(s, p);
  }

  friend PartitionFunctionGame operator+(const PartitionFunctionGame& a,
                                         const PartitionFunctionGame& b);
  friend PartitionFunctionGame operator*(double c, const PartitionFunctionGame& v);

 private:
  int n_ = 0;
  Evaluator eval_;
};

// pi(v): the game with all players relabeled through pi.
PartitionFunctionGame permute_game(const PartitionFunctionGame& v, const Permutation& pi);
Coalition permute(Coalition s, const Permutation& pi);
Partition permute(const Partition& p, const Permutation& pi);

// Bell number via the Bell triangle, exact. 0 <= n <= 20.
std::uint64_t bell_number(int n);

// All set partitions of {0..n-1} in lexicographic restricted-growth-string
// order. 1 <= n <= kMaxEnumerationPlayers.
std::vector<Partition> enumerate_partitions(int n);

namespace detail {

// Enumerates set partitions of `players` (ascending list) by assigning each
// player to an existing block or a new one; visits blocks as masks in
// canonical order. The visit order is lexicographic in the restricted
// growth string. Callback: void(std::span<const std::uint32_t> blocks).
template <typename Fn>
void partitions_of_players(std::span<const Player> players, Fn&& visit) {
  const int k = static_cast<int>(players.size());
  if (k == 0) {
    std::span<const std::uint32_t> none;
    visit(none);
    return;
  }
  std::array<std::uint32_t, kMaxPlayers> blocks{};
  auto rec = [&](auto&& self, int idx, int block_count) -> void {
    if (idx == k) {
      visit(std::span<const std::uint32_t>(blocks.data(), block_count));
      return;
    }
    const std::uint32_t bit = std::uint32_t{1} << players[idx];
    for (int b = 0; b < block_count; ++b) {
      blocks[b] |= bit;
      self(self, idx + 1, block_count);
      blocks[b] &= ~bit;
    }
    blocks[block_count] = bit;
    self(self, idx + 1, block_count + 1);
    blocks[block_count] = 0;
  };
  rec(rec, 0, 0);
}

std::vector<Player> members_of_mask(std::uint32_t mask);

}  // namespace detail

}  // namespace pfg

#endif  // PFG_CORE_HPP
