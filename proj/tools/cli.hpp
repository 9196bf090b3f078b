#pragma once

#include <string>
#include <vector>

namespace umt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;       // bad flags or invalid values
inline constexpr int kIoError = 2;     // unreadable/unwritable files, bad checkpoints
inline constexpr int kNonFinite = 3;   // a loss or metric became NaN/inf

// Runs one command, e.g. {"umt", "synth", "--out", "data"}. Messages go to
// stderr; never calls exit().
int run(const std::vector<std::string>& args);

}  // namespace umt::cli
