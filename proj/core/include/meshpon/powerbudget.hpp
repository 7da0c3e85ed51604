#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshpon/topology.hpp"

namespace meshpon {

enum class BudgetClass { N1, N2, E1, E2, Infeasible };

std::string_view to_string(BudgetClass c);
BudgetClass budget_class_from_string(std::string_view text);

/// Loss parameters for the ODN. Class thresholds are maximum losses (dB)
/// and must be strictly increasing N1 < N2 < E1 < E2.
struct BudgetParams {
  double fbg_loss_db = 2.0;
  double connector_loss_db = 1.0;  // once per end-to-end path
  double fiber_loss_db_per_km = 0.3;
  std::map<std::string, double> splitter_loss_db{
      {"4x4", 7.3}, {"4x8", 10.75}, {"4x16", 14.03}, {"4x32", 17.33}};
  double n1_db = 29.0;
  double n2_db = 31.0;
  double e1_db = 33.0;
  double e2_db = 35.0;
  // lumped gain of an amplified level-1 reflection point
  double level1_edfa_gain_db = 15.0;

  void validate() const;
  double threshold_db(BudgetClass c) const;
  /// Splitter named "AxB" from the loss table.
  SplitterSpec splitter(const std::string& name) const;
};

enum class ReflectAt { Level1, Level2 };

struct PathSpec {
  SplitterSpec stage1;
  std::optional<SplitterSpec> stage2;
  double drop_km = 0.5;
  double trunk_km = 10.0;
  ReflectAt reflect_at = ReflectAt::Level1;
  double edfa_gain_db = 0.0;
};

/// Loss of a reflective EAST-WEST path, ONU to OLT, with the EDFA gain
/// subtracted once at the reflection point. Negative results are returned
/// as-is.
double east_west_loss_db(const PathSpec& path, const BudgetParams& params);

/// Smallest class whose threshold is >= loss_db (boundaries inclusive).
BudgetClass classify_budget(double loss_db, const BudgetParams& params);

/// Minimal non-negative gain, in whole dB, that brings the path within
/// the target class. Any gain already on the path is ignored.
double required_edfa_gain_db(const PathSpec& path, const BudgetParams& params,
                             BudgetClass target);

/// One splitter configuration of the loss table: a level-1 splitter and an
/// optional level-2 splitter used for the reflected (logical ring) path.
struct SplitterConfig {
  std::string stage1;
  std::optional<std::string> stage2;
};

struct BudgetRow {
  int total_split = 0;
  std::string configuration;
  ReflectAt path = ReflectAt::Level1;
  double loss_db = 0.0;
  BudgetClass loss_class = BudgetClass::Infeasible;
  double edfa_gain_db = 0.0;
  double loss_with_edfa_db = 0.0;
  BudgetClass loss_with_edfa_class = BudgetClass::Infeasible;
  double required_gain_n1_db = 0.0;
};

std::vector<SplitterConfig> default_splitter_configs();

/// Level-1 row for every configuration, plus a via-level-2 row for those
/// with a second stage. Level-1 rows use params.level1_edfa_gain_db as the
/// amplified variant; level-2 rows use the gain required for N1.
std::vector<BudgetRow> budget_table(const std::vector<SplitterConfig>& configs,
                                    const BudgetParams& params, double drop_km = 0.5,
                                    double trunk_km = 10.0);

}  // namespace meshpon
