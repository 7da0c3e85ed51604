#include "meshpon/powerbudget.hpp"

#include <cmath>
#include <stdexcept>

namespace meshpon {

namespace {

constexpr BudgetClass kClasses[] = {BudgetClass::N1, BudgetClass::N2, BudgetClass::E1,
                                    BudgetClass::E2};

int ports_of(const std::string& name, bool out) {
  const auto x = name.find('x');
  if (x == std::string::npos) throw ConfigError("splitter name '" + name + "' is not AxB");
  try {
    return std::stoi(out ? name.substr(x + 1) : name.substr(0, x));
  } catch (const std::exception&) {
    throw ConfigError("splitter name '" + name + "' is not AxB");
  }
}

}  // namespace

std::string_view to_string(BudgetClass c) {
  switch (c) {
    case BudgetClass::N1: return "N1";
    case BudgetClass::N2: return "N2";
    case BudgetClass::E1: return "E1";
    case BudgetClass::E2: return "E2";
    case BudgetClass::Infeasible: return "Infeasible";
  }
  return "Infeasible";
}

BudgetClass budget_class_from_string(std::string_view text) {
  for (auto c : kClasses) {
    if (to_string(c) == text) return c;
  }
  throw ConfigError("unknown budget class '" + std::string(text) + "'");
}

void BudgetParams::validate() const {
  if (fbg_loss_db < 0 || connector_loss_db < 0 || fiber_loss_db_per_km < 0) {
    throw ConfigError("budget losses must be non-negative");
  }
  for (const auto& [name, loss] : splitter_loss_db) {
    if (loss < 0) throw ConfigError("splitter " + name + " has negative loss");
  }
  if (!(n1_db < n2_db && n2_db < e1_db && e1_db < e2_db)) {
    throw ConfigError("budget class thresholds must satisfy N1 < N2 < E1 < E2");
  }
  if (level1_edfa_gain_db < 0) throw ConfigError("level-1 EDFA gain must be >= 0");
}

double BudgetParams::threshold_db(BudgetClass c) const {
  switch (c) {
    case BudgetClass::N1: return n1_db;
    case BudgetClass::N2: return n2_db;
    case BudgetClass::E1: return e1_db;
    case BudgetClass::E2: return e2_db;
    case BudgetClass::Infeasible: break;
  }
  throw std::invalid_argument("Infeasible has no loss threshold");
}

SplitterSpec BudgetParams::splitter(const std::string& name) const {
  auto it = splitter_loss_db.find(name);
  if (it == splitter_loss_db.end()) throw ConfigError("no loss entry for splitter " + name);
  return SplitterSpec{ports_of(name, false), ports_of(name, true), it->second, false, 0.0};
}

double east_west_loss_db(const PathSpec& path, const BudgetParams& params) {
  const double fixed = params.fbg_loss_db + params.connector_loss_db;
  if (path.reflect_at == ReflectAt::Level1) {
    return 2.0 * path.stage1.one_way_loss_db + fixed +
           2.0 * path.drop_km * params.fiber_loss_db_per_km - path.edfa_gain_db;
  }
  if (!path.stage2) throw std::invalid_argument("level-2 reflection requires a second stage");
  return 2.0 * path.stage1.one_way_loss_db + 2.0 * path.stage2->one_way_loss_db + fixed +
         (2.0 * path.trunk_km + 2.0 * path.drop_km) * params.fiber_loss_db_per_km -
         path.edfa_gain_db;
}

BudgetClass classify_budget(double loss_db, const BudgetParams& params) {
  // Table values carry two decimals; absorb binary rounding at a boundary.
  constexpr double kEps = 1e-9;
  for (auto c : kClasses) {
    if (loss_db <= params.threshold_db(c) + kEps) return c;
  }
  return BudgetClass::Infeasible;
}

double required_edfa_gain_db(const PathSpec& path, const BudgetParams& params,
                             BudgetClass target) {
  PathSpec bare = path;
  bare.edfa_gain_db = 0.0;
  const double excess = east_west_loss_db(bare, params) - params.threshold_db(target);
  if (excess <= 0.0) return 0.0;
  return std::ceil(excess - 1e-9);
}

std::vector<SplitterConfig> default_splitter_configs() {
  return {{"4x8", "4x4"}, {"4x16", "4x4"}, {"4x32", "4x4"}, {"4x16", "4x8"}};
}

std::vector<BudgetRow> budget_table(const std::vector<SplitterConfig>& configs,
                                    const BudgetParams& params, double drop_km,
                                    double trunk_km) {
  params.validate();
  std::vector<BudgetRow> rows;
  auto label = [](const SplitterConfig& c) {
    return c.stage2 ? c.stage1 + " - " + *c.stage2 : c.stage1;
  };
  auto split_of = [&](const SplitterConfig& c) {
    const auto s1 = params.splitter(c.stage1);
    const int s2 = c.stage2 ? params.splitter(*c.stage2).ports_out : 1;
    return s1.ports_out * s2;
  };

  for (const auto& c : configs) {
    PathSpec p;
    p.stage1 = params.splitter(c.stage1);
    p.drop_km = drop_km;
    p.trunk_km = trunk_km;
    BudgetRow r;
    r.total_split = split_of(c);
    r.configuration = label(c);
    r.path = ReflectAt::Level1;
    r.loss_db = east_west_loss_db(p, params);
    r.loss_class = classify_budget(r.loss_db, params);
    r.edfa_gain_db = params.level1_edfa_gain_db;
    p.edfa_gain_db = r.edfa_gain_db;
    r.loss_with_edfa_db = east_west_loss_db(p, params);
    r.loss_with_edfa_class = classify_budget(r.loss_with_edfa_db, params);
    r.required_gain_n1_db = required_edfa_gain_db(p, params, BudgetClass::N1);
    rows.push_back(r);
  }
  for (const auto& c : configs) {
    if (!c.stage2) continue;
    PathSpec p;
    p.stage1 = params.splitter(c.stage1);
    p.stage2 = params.splitter(*c.stage2);
    p.drop_km = drop_km;
    p.trunk_km = trunk_km;
    p.reflect_at = ReflectAt::Level2;
    BudgetRow r;
    r.total_split = split_of(c);
    r.configuration = label(c);
    r.path = ReflectAt::Level2;
    r.loss_db = east_west_loss_db(p, params);
    r.loss_class = classify_budget(r.loss_db, params);
    r.required_gain_n1_db = required_edfa_gain_db(p, params, BudgetClass::N1);
    r.edfa_gain_db = r.required_gain_n1_db;
    p.edfa_gain_db = r.edfa_gain_db;
    r.loss_with_edfa_db = east_west_loss_db(p, params);
    r.loss_with_edfa_class = classify_budget(r.loss_with_edfa_db, params);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace meshpon
