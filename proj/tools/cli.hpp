#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expsumcli {

/// Full command-line entry point. Returns 0 on success, 2 for malformed
/// input or usage, 3 for infeasible mathematics; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

/// Convenience overload: arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace expsumcli
