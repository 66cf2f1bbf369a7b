#pragma once

// Command-line front end. run() parses arguments, dispatches a subcommand
// and returns the process exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chatnet/cli/report.hpp"
#include "chatnet/cli/scenario.hpp"

namespace chatnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNoEquilibrium = 2;

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
  // Replaces the table when set (normalize).
  std::optional<std::string> raw;
};

struct SolveOptions {
  std::optional<std::string> root;
  double tolerance = kTolerance;
};

struct SweepLambdaOptions {
  std::vector<std::string> agents;  // empty means every agent
  double from = 0.0;
  double to = 10.0;
  double step = 1.0;
  unsigned threads = 1;
  double tolerance = kTolerance;
};

CommandResult cmd_solve(const Scenario& s, const SolveOptions& opt);
CommandResult cmd_sweep_lambda(const Scenario& s, const SweepLambdaOptions& opt);
CommandResult cmd_sweep_root(const Scenario& s, unsigned threads, double tolerance);
// Takes the file path so parse and schema failures become diagnostics.
CommandResult cmd_validate(const std::string& path, double tolerance);
CommandResult cmd_normalize(const Scenario& s, bool compact);
CommandResult cmd_selfcheck(unsigned long long seed, long draws, double tolerance);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chatnet::cli
