#include "pfg/core.hpp"

#include <algorithm>
#include <sstream>

namespace pfg {

namespace {

std::uint32_t lowest_bit(std::uint32_t m) { return m & (~m + 1); }

void append_members(std::ostream& os, std::uint32_t mask) {
  os << '{';
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if ((mask >> i) & 1u) {
      if (!first) os << ',';
      os << (i + 1);  // 1-indexed for display
      first = false;
    }
  }
  os << '}';
}

}  // namespace

Player Coalition::lowest() const {
  if (mask_ == 0) throw std::logic_error("lowest() on empty coalition");
  return std::countr_zero(mask_);
}

std::vector<Player> Coalition::members() const {
  return detail::members_of_mask(mask_);
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  append_members(os, mask_);
  return os.str();
}

std::vector<Player> detail::members_of_mask(std::uint32_t mask) {
  std::vector<Player> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

Permutation::Permutation(std::vector<Player> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  pos_.assign(n, -1);
  for (int t = 0; t < n; ++t) {
    Player p = order_[t];
    if (p < 0 || p >= n || pos_[p] != -1)
      throw std::invalid_argument("permutation is not a bijection on 0..n-1");
    pos_[p] = t;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<Player> o(n);
  for (int i = 0; i < n; ++i) o[i] = i;
  return Permutation(std::move(o));
}

Permutation Permutation::inverse() const {
  std::vector<Player> o(order_.size());
  for (int t = 0; t < static_cast<int>(order_.size()); ++t) o[order_[t]] = t;
  return Permutation(std::move(o));
}

Coalition Permutation::trailing(Player i) const {
  std::uint32_t m = 0;
  for (int t = pos_[i] + 1; t < size(); ++t) m |= std::uint32_t{1} << order_[t];
  return Coalition::from_mask(m);
}

void Partition::insert_block_sorted(std::uint32_t mask) {
  int pos = count_;
  while (pos > 0 && lowest_bit(blocks_[pos - 1]) > lowest_bit(mask)) {
    blocks_[pos] = blocks_[pos - 1];
    --pos;
  }
  blocks_[pos] = mask;
  ++count_;
}

Partition Partition::singletons(int n) {
  Partition p;
  p.n_ = n;
  p.count_ = n;
  for (int i = 0; i < n; ++i) p.blocks_[i] = std::uint32_t{1} << i;
  return p;
}

Partition Partition::grand(int n) {
  Partition p;
  p.n_ = n;
  p.count_ = 1;
  p.blocks_[0] = Coalition::full(n).mask();
  return p;
}

Partition Partition::from_blocks(int n, std::span<const Coalition> blocks) {
  if (n < 1 || n > kMaxPlayers) throw size_error("player count out of range 1..20");
  Partition p;
  p.n_ = n;
  std::uint32_t seen = 0;
  for (Coalition b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition block must be nonempty");
    if (b.mask() & seen) throw std::invalid_argument("partition blocks overlap");
    if (!b.subset_of(Coalition::full(n)))
      throw std::invalid_argument("partition block outside the player set");
    seen |= b.mask();
    p.insert_block_sorted(b.mask());
  }
  if (seen != Coalition::full(n).mask())
    throw std::invalid_argument("partition does not cover the player set");
  return p;
}

Partition Partition::from_blocks(int n, std::initializer_list<Coalition> blocks) {
  return from_blocks(n, std::span<const Coalition>(blocks.begin(), blocks.size()));
}

bool Partition::has_block(Coalition c) const {
  for (int i = 0; i < count_; ++i)
    if (blocks_[i] == c.mask()) return true;
  return false;
}

Coalition Partition::block_of(Player i) const {
  return Coalition::from_mask(blocks_[block_index_of(i)]);
}

int Partition::block_index_of(Player i) const {
  const std::uint32_t bit = std::uint32_t{1} << i;
  for (int b = 0; b < count_; ++b)
    if (blocks_[b] & bit) return b;
  throw std::invalid_argument("player not covered by partition");
}

Partition Partition::transfer(Player i, Coalition target) const {
  const std::uint32_t bit = std::uint32_t{1} << i;
  if (target.contains(i)) throw std::invalid_argument("transfer target already contains the player");
  if (!target.empty() && !has_block(target))
    throw std::invalid_argument("transfer target is not a block of the partition");
  Partition out;
  out.n_ = n_;
  for (int b = 0; b < count_; ++b) {
    std::uint32_t m = blocks_[b];
    if (m & bit) m &= ~bit;           // vacate i's old block
    if (m == target.mask() && !target.empty()) m |= bit;
    if (m != 0) out.insert_block_sorted(m);
  }
  if (target.empty()) out.insert_block_sorted(bit);
  return out;
}

Partition Partition::isolate(Coalition s) const {
  Partition out;
  out.n_ = n_;
  for (int b = 0; b < count_; ++b) {
    std::uint32_t trace = blocks_[b] & ~s.mask();
    if (trace != 0) out.insert_block_sorted(trace);
  }
  if (!s.empty()) out.insert_block_sorted(s.mask());
  return out;
}

bool operator==(const Partition& a, const Partition& b) {
  if (a.n_ != b.n_ || a.count_ != b.count_) return false;
  for (int i = 0; i < a.count_; ++i)
    if (a.blocks_[i] != b.blocks_[i]) return false;
  return true;
}

std::size_t Partition::hash() const {
  std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(n_);
  for (int i = 0; i < count_; ++i) {
    h ^= blocks_[i] + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (int b = 0; b < count_; ++b) {
    if (b) os << ',';
    append_members(os, blocks_[b]);
  }
  os << '}';
  return os.str();
}

bool GameTable::set(Coalition s, const Partition& p, double value) {
  return values_.emplace(EmbeddedCoalition{s, p}, value).second;
}

double GameTable::get(Coalition s, const Partition& p) const {
  auto it = values_.find(EmbeddedCoalition{s, p});
  return it == values_.end() ? 0.0 : it->second;
}

std::vector<std::pair<EmbeddedCoalition, double>> GameTable::sorted_entries() const {
  std::vector<std::pair<EmbeddedCoalition, double>> out(values_.begin(), values_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.coalition != b.first.coalition)
      return a.first.coalition < b.first.coalition;
    for (int i = 0; i < a.first.partition.block_count() && i < b.first.partition.block_count(); ++i) {
      if (a.first.partition.block(i) != b.first.partition.block(i))
        return a.first.partition.block(i) < b.first.partition.block(i);
    }
    return a.first.partition.block_count() < b.first.partition.block_count();
  });
  return out;
}

PartitionFunctionGame PartitionFunctionGame::from_table(GameTable table) {
  const int n = table.player_count();
  auto shared = std::make_shared<GameTable>(std::move(table));
  return PartitionFunctionGame(
      n, [shared](Coalition s, const Partition& p) { return shared->get(s, p); });
}

PartitionFunctionGame PartitionFunctionGame::without_externalities(
    int n, std::function<double(Coalition)> v_hat) {
  auto shared = std::make_shared<std::function<double(Coalition)>>(std::move(v_hat));
  return PartitionFunctionGame(
      n, [shared](Coalition s, const Partition&) { return (*shared)(s); });
}

PartitionFunctionGame PartitionFunctionGame::zero(int n) {
  return PartitionFunctionGame(n, [](Coalition, const Partition&) { return 0.0; });
}

PartitionFunctionGame operator+(const PartitionFunctionGame& a,
                                const PartitionFunctionGame& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("adding games over different player sets");
  auto ea = a.eval_;
  auto eb = b.eval_;
  return PartitionFunctionGame(a.n_, [ea, eb](Coalition s, const Partition& p) {
    return ea(s, p) + eb(s, p);
  });
}

PartitionFunctionGame operator*(double c, const PartitionFunctionGame& v) {
  auto e = v.eval_;
  return PartitionFunctionGame(v.n_, [c, e](Coalition s, const Partition& p) {
    return c * e(s, p);
  });
}

Coalition permute(Coalition s, const Permutation& pi) {
  std::uint32_t m = 0;
  std::uint32_t in = s.mask();
  while (in) {
    int i = std::countr_zero(in);
    in &= in - 1;
    m |= std::uint32_t{1} << pi.image(i);
  }
  return Coalition::from_mask(m);
}

Partition permute(const Partition& p, const Permutation& pi) {
  std::vector<Coalition> blocks;
  blocks.reserve(p.block_count());
  for (int b = 0; b < p.block_count(); ++b) blocks.push_back(permute(p.block(b), pi));
  return Partition::from_blocks(p.player_count(), blocks);
}

PartitionFunctionGame permute_game(const PartitionFunctionGame& v, const Permutation& pi) {
  auto shared = std::make_shared<Permutation>(pi);
  auto eval = [shared, v](Coalition s, const Partition& p) {
    return v.value(permute(s, *shared), permute(p, *shared));
  };
  return PartitionFunctionGame(v.player_count(), eval);
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > kMaxPlayers)
    throw size_error("bell_number supports 0 <= n <= 20 (exact 64-bit range)");
  // Bell triangle: row r starts with the last element of row r-1.
  std::vector<std::uint64_t> row{1};
  for (int r = 1; r <= n; ++r) {
    std::vector<std::uint64_t> next(r + 1);
    next[0] = row.back();
    for (int i = 1; i <= r; ++i) next[i] = next[i - 1] + row[i - 1];
    row = std::move(next);
  }
  return row[0];
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1 || n > kMaxEnumerationPlayers)
    throw size_error("enumerate_partitions supports 1 <= n <= 12");
  std::vector<Player> players(n);
  for (int i = 0; i < n; ++i) players[i] = i;
  std::vector<Partition> out;
  out.reserve(static_cast<std::size_t>(bell_number(n)));
  detail::partitions_of_players(players, [&](std::span<const std::uint32_t> blocks) {
    std::vector<Coalition> bs;
    bs.reserve(blocks.size());
    for (std::uint32_t m : blocks) bs.push_back(Coalition::from_mask(m));
    out.push_back(Partition::from_blocks(n, bs));
  });
  return out;
}

}  // namespace pfg
