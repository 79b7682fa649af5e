#include "pfg/game_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pfg {

namespace {

using nlohmann::json;

[[noreturn]] void fail_entry(std::size_t idx, const std::string& why) {
  throw parse_error("entry " + std::to_string(idx) + ": " + why);
}

Coalition players_to_coalition(const json& arr, int n, std::size_t idx,
                               const char* what) {
  if (!arr.is_array()) fail_entry(idx, std::string(what) + " must be an array of players");
  std::uint32_t mask = 0;
  for (const json& j : arr) {
    if (!j.is_number_integer()) fail_entry(idx, std::string(what) + " must contain integers");
    const long p = j.get<long>();
    if (p < 1 || p > n)
      fail_entry(idx, std::string(what) + " mentions player " + std::to_string(p) +
                          " outside 1.." + std::to_string(n));
    const std::uint32_t bit = std::uint32_t{1} << (p - 1);
    if (mask & bit)
      fail_entry(idx, std::string(what) + " lists player " + std::to_string(p) + " twice");
    mask |= bit;
  }
  return Coalition::from_mask(mask);
}

}  // namespace

GameTable parse_game_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer())
    throw parse_error("game file must be an object with an integer field 'n'");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > kMaxPlayers)
    throw size_error("game file has n=" + std::to_string(n) + "; supported range is 1..20");
  if (!doc.contains("values") || !doc["values"].is_array())
    throw parse_error("game file must have an array field 'values'");

  GameTable table(n);
  std::size_t idx = 0;
  for (const json& entry : doc["values"]) {
    ++idx;
    if (!entry.is_object() || !entry.contains("coalition") || !entry.contains("partition") ||
        !entry.contains("value"))
      fail_entry(idx, "needs fields coalition, partition, value");
    if (!entry["value"].is_number()) fail_entry(idx, "value must be a number");

    const Coalition coalition = players_to_coalition(entry["coalition"], n, idx, "coalition");
    if (coalition.empty()) fail_entry(idx, "coalition must be nonempty");

    if (!entry["partition"].is_array()) fail_entry(idx, "partition must be an array of blocks");
    std::vector<Coalition> blocks;
    for (const json& b : entry["partition"])
      blocks.push_back(players_to_coalition(b, n, idx, "partition block"));
    Partition partition;
    try {
      partition = Partition::from_blocks(n, blocks);
    } catch (const std::invalid_argument& e) {
      fail_entry(idx, e.what());
    }
    if (!partition.has_block(coalition))
      fail_entry(idx, "coalition " + coalition.to_string() + " is not a block of the partition");

    if (!table.set(coalition, partition, entry["value"].get<double>()))
      fail_entry(idx, "duplicate embedded coalition " + coalition.to_string() + " in " +
                          partition.to_string());
  }
  return table;
}

GameTable parse_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open game file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str());
}

PartitionFunctionGame load_game_file(const std::string& path) {
  return PartitionFunctionGame::from_table(parse_game_file(path));
}

std::string serialize_game(const GameTable& table) {
  json values = json::array();
  for (const auto& [ec, value] : table.sorted_entries()) {
    json entry;
    json coalition = json::array();
    for (Player p : ec.coalition.members()) coalition.push_back(p + 1);
    json partition = json::array();
    for (int b = 0; b < ec.partition.block_count(); ++b) {
      json block = json::array();
      for (Player p : ec.partition.block(b).members()) block.push_back(p + 1);
      partition.push_back(std::move(block));
    }
    entry["coalition"] = std::move(coalition);
    entry["partition"] = std::move(partition);
    entry["value"] = value;
    values.push_back(std::move(entry));
  }
  json doc;
  doc["n"] = table.player_count();
  doc["values"] = std::move(values);
  return doc.dump(2) + "\n";
}

}  // namespace pfg
