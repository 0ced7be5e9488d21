#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hookwalk::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kIdentityFailed = 2,
  kNoConvergence = 3,
};

//! Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

//! %.17g.
std::string format_real(double v);

}  // namespace hookwalk::cli
