#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stardmp {

/// Runs the command line tool in-process.  `args` excludes the program
/// name.  Reports go to `out`, diagnostics to `err`; the return value is
/// the process exit code (0 success / pass, 1 negative check verdict,
/// 2 inverse does not exist, 3 verification or numerical failure,
/// 64 usage or input format error).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace stardmp
