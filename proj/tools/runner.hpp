#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "meshpon/io.hpp"
#include "meshpon/latmodel.hpp"
#include "meshpon/maio.hpp"
#include "meshpon/powerbudget.hpp"
#include "meshpon/topology.hpp"

namespace meshpon::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

struct LayoutSection {
  std::optional<std::string> file;  // layout JSON; generated when absent
  int n_macro = 7;
  int n_small = 60;
  double width_km = 5.0;
  double height_km = 5.0;
  LayoutParams params;
};

struct BudgetSection {
  BudgetParams params;
  double drop_km = 0.5;
  double trunk_km = 10.0;
  std::vector<SplitterConfig> configs = default_splitter_configs();
};

struct SimulateSection {
  std::optional<VPonSlice> slice;  // explicit slice; otherwise composed below
  int n71 = 4;
  int n72 = 4;
  double load = 0.5;
  double distance_km = 1.0;
  int wavelengths = 1;
  bool trace = false;
};

struct RegionSection {
  std::vector<double> loads{0.5, 0.7, 0.9};
  int max_n71 = 16;
  int max_n72 = 32;
  double threshold_us = 100.0;
  double distance_km = 1.0;
  int wavelengths = 1;
  bool des_check = false;
};

struct OptimizeSection {
  std::vector<double> loads{0.5};
  std::vector<int> max_iterations{100};
  double threshold_us = 100.0;
  int wavelengths_per_tree = 4;
  int slice_wavelengths = 1;
  std::int64_t ilp_node_limit = 200000;
  OracleKind oracle = OracleKind::Analytical;
  CutMode cut_mode = CutMode::Minimal;
  bool allow_co = true;
  bool validate_with_des = false;
};

/// Everything a run needs. Every field has a default; a config file only
/// lists what it changes.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  LayoutSection layout;
  SimConfig sim;
  LatencyModel model = LatencyModel::GatedCycle;
  BudgetSection budget;
  SimulateSection simulate;
  RegionSection region;
  OptimizeSection optimize;
};

/// Overlays `doc` on the defaults. Unknown keys and type mismatches throw
/// ConfigError naming the offending field.
ExperimentConfig config_from_json(const Json& doc);
/// Same, resolving a relative layout.file against `base`.
ExperimentConfig config_from_json(const Json& doc, const std::filesystem::path& base);
/// Reads and parses a config file; parse errors carry line and column.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved config, as embedded in every artifact.
Json to_json(const ExperimentConfig& config);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<OracleKind> oracle;
  std::optional<int> max_iterations;
};
void apply(ExperimentConfig& config, const Overrides& overrides);

/// Layout named by the config: read from file or generated from the seed.
NetworkLayout resolve_layout(const ExperimentConfig& config);

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;  // in write order
  std::string message;
};

struct BudgetRun : RunResult {
  std::vector<BudgetRow> rows;
};

struct SimulateRun : RunResult {
  VPonSlice slice;
  std::optional<SimResult> simulated;
  std::optional<LatencyEstimate> analytical;
  std::optional<double> unstable_rho;
};

struct RegionPoint {
  double load = 0.0;
  int n71 = 0;
  int n72 = 0;
  bool feasible = false;
  std::optional<double> analytical_us;  // empty when unstable
  std::optional<double> simulated_us;   // des_check only
};

struct RegionRun : RunResult {
  std::vector<RegionPoint> points;
};

struct OptimizeCase {
  double load = 0.0;
  int max_iterations = 0;
  MaioSolution solution;
};

struct OptimizeRun : RunResult {
  NetworkLayout layout;
  std::vector<OptimizeCase> cases;
};

BudgetRun run_budget(const ExperimentConfig& config);
/// Exit code 3 when the slice is unstable.
SimulateRun run_simulate(const ExperimentConfig& config);
RegionRun run_region(const ExperimentConfig& config);
/// Exit code 3 when any case ends Infeasible.
OptimizeRun run_optimize(const ExperimentConfig& config);

}  // namespace meshpon::runner
