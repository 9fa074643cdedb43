#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace er2rel {

/// Command-line driver (subcommands: transform, analyze, verify).
/// Exit codes: 0 success / oracle agreement, 1 usage errors or input
/// diagnostics, 2 oracle disagreement, 3 enumeration cap exceeded.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace er2rel
