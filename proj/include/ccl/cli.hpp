#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccl/numerics.hpp"

namespace YAML {
class Node;
}

namespace ccl {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitParse = 2, kExitPrecondition = 3 };

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::size_t grid_budget = kDefaultGridBudget;
  std::vector<std::string> overrides;  // "dotted.key=value"
};

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "==", "<"
  bool pass = false;
};

struct PipelineReport {
  std::string pipeline;
  std::uint64_t seed = 0;
  std::vector<CheckLine> checks;
  bool ok() const;
};

/// Pipelines in the order `all` runs them.
const std::vector<std::string>& pipeline_names();

/// Parses a YAML scenario; ParseError on I/O or syntax problems.
YAML::Node load_config(const std::string& path);

/// Sets a dotted key ("weight.A=3") in the tree; the value is parsed as YAML.
void apply_override(YAML::Node& root, const std::string& assignment);

/// CCL_OUT_DIR when set, else "ccl-out".
std::filesystem::path default_out_dir();

/// Runs one pipeline and writes its reports under out_dir/<pipeline>/.
/// Throws library errors; check failures are recorded in the report.
PipelineReport run_pipeline(const std::string& name, const YAML::Node& config,
                            const RunOptions& opt);

/// checks.csv with columns check,value,relation,threshold,pass.
void emit_report(const PipelineReport& report, const std::filesystem::path& dir);

/// Front end shared by the executable and the tests: loads the config (when
/// given), applies overrides, runs the subcommand, prints one line per check
/// and maps errors to exit codes.
int run_scenario(const std::string& subcommand, const std::string& config_path,
                 const RunOptions& opt, std::ostream& log);

}  // namespace ccl
