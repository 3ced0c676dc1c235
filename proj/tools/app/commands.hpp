#ifndef NGSL_APP_COMMANDS_HPP
#define NGSL_APP_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ngsl/evolution.hpp"
#include "output.hpp"
#include "scenario.hpp"

namespace ngsl::app {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 1,
  exit_violation = 2,
  exit_io = 3,
};

struct SimulationOutput {
  Trajectory trajectory;
  Json summary;
  std::string csv;
  std::string summary_text;
};

SimulationOutput simulate(const Scenario& sc);

/// Writes trajectory.csv and summary.json (as selected by the scenario's
/// output formats) into `dir`, creating it if needed.
void write_outputs(const Scenario& sc, const SimulationOutput& result, const std::filesystem::path& dir);

Json event_report(const Scenario& sc);
Json demon_report(const Scenario& sc, bool* pass);

/// Runs every sweep point and writes `sweep_index.json`. Parallelism is capped
/// by the NGSL_THREADS environment variable.
Json run_sweep(const Scenario& sc, const std::filesystem::path& dir, std::optional<LedgerMode> mode);

/// Entry point behind `ngsl <subcommand> --scenario <path> [--out <dir>] [--mode ...]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ngsl::app

#endif  // NGSL_APP_COMMANDS_HPP
