#include <CLI11.hpp>

#include <iostream>

#include "ccl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted entire-function spaces over cones: scenario runner"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t budget = ccl::kDefaultGridBudget;
  std::vector<std::string> sets;
  app.add_option("--config", config, "Scenario file (YAML)");
  app.add_option("--out", out, "Output directory (default: $CCL_OUT_DIR or ccl-out)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random probes");
  app.add_option("--grid-budget", budget, "Maximum points per grid");
  app.add_option("--set", sets, "Override a config key, e.g. --set weight.A=3")->allow_extra_args(false);

  for (const auto& name : ccl::pipeline_names()) app.add_subcommand(name, "Run the " + name + " pipeline");
  app.add_subcommand("all", "Run every pipeline");
  for (auto* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ccl::kExitParse;
  }

  ccl::RunOptions opt;
  opt.out_dir = out;
  if (*seed_opt) opt.seed = seed;
  opt.grid_budget = budget;
  opt.overrides = sets;
  return ccl::run_scenario(app.get_subcommands().front()->get_name(), config, opt, std::cout);
}
