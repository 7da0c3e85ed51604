#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

namespace {

using namespace meshpon;
using namespace meshpon::runner;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> oracle;
  std::optional<int> max_iterations;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config (defaults for every missing field)");
  cmd->add_option("--seed", f.seed, "seed for layout generation and simulation");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--oracle", f.oracle, "latency oracle for optimize")
      ->check(CLI::IsMember({"analytical", "simulated"}));
  cmd->add_option("--max-iterations", f.max_iterations, "iterations per MEC-count bound (optimize)");
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig config = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  Overrides o;
  o.seed = f.seed;
  if (f.out) o.out_dir = *f.out;
  if (f.oracle) o.oracle = oracle_kind_from_string(*f.oracle);
  o.max_iterations = f.max_iterations;
  apply(config, o);
  return config;
}

int report(const RunResult& r) {
  for (const auto& p : r.files) std::cout << p.string() << '\n';
  if (!r.message.empty()) std::cerr << r.message << '\n';
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshpon: MEC-aware vPON slicing experiments"};
  app.require_subcommand(1);
  Flags flags;
  auto* budget = app.add_subcommand("budget", "power budget table for the splitter configurations");
  auto* simulate = app.add_subcommand("simulate", "simulate one slice and compare with the analytical model");
  auto* region = app.add_subcommand("region", "feasible (n71, n72) membership per load");
  auto* optimize = app.add_subcommand("optimize", "iterative MEC placement and slice assignment");
  for (auto* cmd : {budget, simulate, region, optimize}) add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    ExperimentConfig config = resolve(flags);
    if (budget->parsed()) return report(run_budget(config));
    if (simulate->parsed()) return report(run_simulate(config));
    if (region->parsed()) return report(run_region(config));
    return report(run_optimize(config));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
