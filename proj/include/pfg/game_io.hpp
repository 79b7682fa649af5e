#ifndef PFG_GAME_IO_HPP
#define PFG_GAME_IO_HPP

#include <string>

#include "pfg/core.hpp"

namespace pfg {

// Game files are JSON:
//   {"n": 3, "values": [{"coalition": [1,2], "partition": [[1,2],[3]],
//                        "value": 4.0}, ...]}
// Players are 1-indexed. Every entry's partition must be a valid partition
// of 1..n containing the coalition; unspecified embedded coalitions are
// worth 0; duplicate (coalition, partition) keys are rejected. Validation
// errors name the offending entry.

GameTable parse_game_text(const std::string& text);
GameTable parse_game_file(const std::string& path);

PartitionFunctionGame load_game_file(const std::string& path);

// Inverse of parsing: emits the documented format with entries and members
// sorted, so equal tables serialize identically.
std::string serialize_game(const GameTable& table);

}  // namespace pfg

#endif  // PFG_GAME_IO_HPP
