#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spooky {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // invariant tripped or verification failed
inline constexpr int kExitUsage = 2;    // bad config, bad flags, unreadable input

/// Entry point of the `spooky` tool: play, boxgame, sweep, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "1,2,4" or "1..8" or "1..16:x2" (geometric) -> values.
std::vector<std::uint64_t> parse_int_list(const std::string& text);

}  // namespace spooky
