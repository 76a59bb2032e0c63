#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cheb2d {

enum ExitCode : int {
  exit_ok = 0,
  exit_not_certified = 1,
  exit_argument_error = 2,
  exit_evaluation_error = 3,
  exit_nonconvergent = 4,
};

/// Runs the command line with args excluding the program name. Summaries go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a node rule such as "2d+2", "3*d", "d+1" or "64" and applies it.
int apply_node_rule(const std::string& rule, int d);

}  // namespace cheb2d
