#ifndef PFG_CLI_HPP
#define PFG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pfg {

// Exit codes shared by the command-line surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitSize = 4;

// Runs the command-line interface on the given arguments (program name
// excluded). All regular output goes to `out`; failures print one line
// "E_<CODE> <message>" to `err` and return the matching exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfg

#endif  // PFG_CLI_HPP
