#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairmatch::cli {

/// Exit-code contract, fixed for scripting:
/// 0 pass, 1 property failure, 2 usage or capability error, 3 I/O error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitPropertyFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs one command ("gen", "run", "verify", "counterexample", "bench")
/// in-process. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairmatch::cli
