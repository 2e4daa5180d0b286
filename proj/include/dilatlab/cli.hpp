#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dilatlab {

/// Exit statuses of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitConfig = 64 };

struct RunConfig {
  std::string command;
  std::string structure;
  std::string manifest;
  std::vector<std::string> checks;
  double eps_start = 0.5;
  std::size_t eps_count = 12;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::string point;
  std::string out;
  std::string format = "json";
  /// Whether --eps-start/--eps-count and --samples were given; otherwise
  /// each command picks its own defaults.
  bool schedule_given = false;
  bool samples_given = false;
};

/// Names accepted as --tol.<name>.
const std::vector<std::string>& tolerance_names();

/// Parses argv into a RunConfig; throws Error(Config) naming the offending
/// field. `--help` output goes to `out` and yields a config with an empty
/// command.
RunConfig parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes a parsed configuration. Reports go to files when `out` is set,
/// otherwise to `stdout_stream`.
int run(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& stderr_stream);

/// parse_args + run with exit status mapping.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dilatlab
