#pragma once

#include <ostream>

namespace flowstack::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitTraining = 3;

// Worker count for the parallel kernels; the only variable read from the environment.
inline constexpr const char* kThreadsEnv = "FLOWSTACK_THREADS";

// Entry point behind the `flowstack` binary. Errors print one line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flowstack::cli
