#include <gtest/gtest.h>

#include <random>

#include "../common/brute.hpp"
#include "../common/instances.hpp"
#include "meshpon/maio.hpp"

using namespace meshpon;
using testkit::problem_for;
using testkit::random_small;
using testkit::reference_instance;

namespace {

struct MacroSpec {
  double x, y;
  int capacity;
  int level2;
};

struct CellSpec {
  double x, y;
  int parent;
  SplitKind split;
};

NetworkLayout build_layout(const std::vector<MacroSpec>& macros, const std::vector<CellSpec>& cells,
                           const std::vector<Point>& level2) {
  NetworkLayout l;
  l.area_width_km = 10;
  l.area_height_km = 10;
  for (std::size_t i = 0; i < level2.size(); ++i) {
    l.level2_splitters.push_back({static_cast<int>(i), level2[i], {}});
  }
  for (std::size_t i = 0; i < macros.size(); ++i) {
    MacroSite m;
    m.id = static_cast<int>(i);
    m.position = {macros[i].x, macros[i].y};
    m.mec_capacity = macros[i].capacity;
    m.level2_id = macros[i].level2;
    m.fiber_to_level2_km = std::max(0.01, euclidean_km(m.position, level2[m.level2_id]));
    l.macro_sites.push_back(m);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    SmallCell c;
    c.id = static_cast<int>(i);
    c.position = {cells[i].x, cells[i].y};
    c.parent_macro = cells[i].parent;
    c.split = cells[i].split;
    c.fiber_to_level1_km = std::max(0.01, euclidean_km(c.position, l.macro(c.parent_macro).position));
    l.small_cells.push_back(c);
  }
  return l;
}

// eight split-7.1 cells around macro 0, a second macro 0.4 km away
MaioProblem crowded_pair(double load) {
  std::vector<CellSpec> cells;
  for (int i = 0; i < 8; ++i) cells.push_back({0.1 * (i % 4), 0.2 + 0.1 * (i / 4), 0, SplitKind::Split71});
  return problem_for(build_layout({{0, 0, 8, 0}, {0.4, 0, 8, 0}}, cells, {{0.2, 0}}), load);
}

void expect_sound(const MaioProblem& p, const MaioSolution& s, const LatencyOracle& oracle) {
  if (s.status == MaioStatus::Infeasible) return;
  const auto lb = solve_ilp(build_ilp(p));
  EXPECT_EQ(s.n_mec_lower_bound, lb.objective);
  EXPECT_GE(static_cast<int>(s.enabled_mecs.size()), s.n_mec_lower_bound);
  EXPECT_EQ(s.assignment.size(), p.layout.small_cells.size());
  for (const auto& sr : s.slices) {
    if (sr.slice.members.empty()) continue;
    EXPECT_FALSE(sr.unstable);
    EXPECT_LE(oracle.evaluate(sr.slice).mean_us, p.threshold_us);
  }
}

bool violates(const MaioProblem& p, const LatencyOracle& oracle, OltSite site,
              const std::vector<int>& ids) {
  try {
    return oracle.evaluate(make_slice(p.layout, p.traffic, site, ids)).mean_us > p.threshold_us;
  } catch (const UnstableError&) {
    return true;
  }
}

}  // namespace

TEST(Maio, LightLoadOneSplitterNeedsOneMec) {
  std::vector<CellSpec> cells;
  for (int i = 0; i < 5; ++i) cells.push_back({0.1 * i, 0.3, 0, SplitKind::Split72});
  auto p = problem_for(build_layout({{0, 0, 8, 0}, {3, 0, 8, 0}}, cells, {{1.5, 0}}), 0.2);
  const auto s = maio_optimize(p);
  EXPECT_EQ(s.status, MaioStatus::Optimal);
  EXPECT_EQ(s.enabled_mecs, (std::vector<int>{0}));
  EXPECT_EQ(s.cuts_added, 0);
  EXPECT_EQ(s.iterations_used, 1);
}

TEST(Maio, OverloadedMecSplitsInTwo) {
  const auto p = crowded_pair(0.9);
  const auto oracle = make_oracle(p);
  const auto s = maio_optimize(p, *oracle);
  EXPECT_EQ(s.n_mec_lower_bound, 1);
  EXPECT_EQ(s.status, MaioStatus::Optimal);
  EXPECT_EQ(s.enabled_mecs.size(), 2u);
  EXPECT_GE(s.cuts_added, 1);
  EXPECT_EQ(testkit::brute_force_maio(p, *oracle), 2);
  expect_sound(p, s, *oracle);
}

TEST(Maio, ExactCutsReachTheSameOptimum) {
  auto p = crowded_pair(0.9);
  p.cut_mode = CutMode::Exact;
  const auto s = maio_optimize(p);
  EXPECT_EQ(s.status, MaioStatus::Optimal);
  EXPECT_EQ(s.enabled_mecs.size(), 2u);
}

TEST(Maio, MatchesBruteForceOnSmallInstances) {
  std::mt19937_64 rng(99);
  int latency_bound = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_small(rng);
    const auto oracle = make_oracle(p);
    const auto s = maio_optimize(p, *oracle);
    const int want = testkit::brute_force_maio(p, *oracle);
    if (want < 0) {
      EXPECT_EQ(s.status, MaioStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_NE(s.status, MaioStatus::Infeasible) << "trial " << trial;
    EXPECT_EQ(static_cast<int>(s.enabled_mecs.size()), want) << "trial " << trial;
    latency_bound += s.cuts_added > 0;
    expect_sound(p, s, *oracle);
  }
  EXPECT_GT(latency_bound, 5);
}

TEST(Maio, CutsOnlyRemoveViolatingSlices) {
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_small(rng);
    const auto oracle = make_oracle(p);
    const auto s = maio_optimize(p, *oracle);
    checked += s.cuts.size();
    for (const auto& cut : s.cuts) {
      EXPECT_TRUE(violates(p, *oracle, cut.site, cut.ru_ids));
      // and so does every superset
      std::vector<int> more = cut.ru_ids;
      for (const auto& c : p.layout.small_cells) {
        if (std::find(more.begin(), more.end(), c.id) != more.end()) continue;
        if (olt_distance_km(p.layout, c.id, cut.site) < 0) continue;
        more.push_back(c.id);
        std::sort(more.begin(), more.end());
        EXPECT_TRUE(violates(p, *oracle, cut.site, more));
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Maio, ReferenceInstanceIsSound) {
  for (double load : {0.3, 0.5}) {
    const auto p = reference_instance(7, load);
    const auto oracle = make_oracle(p);
    const auto s = maio_optimize(p, *oracle);
    ASSERT_NE(s.status, MaioStatus::Infeasible) << load;
    expect_sound(p, s, *oracle);
    EXPECT_EQ(s.log.back().feasible, true);
    EXPECT_EQ(s.iterations_used, static_cast<int>(s.log.size()));
    for (std::size_t i = 1; i < s.log.size(); ++i) {
      EXPECT_GE(s.log[i].bound, s.log[i - 1].bound);
      EXPECT_GE(s.log[i].cuts_total, s.log[i - 1].cuts_total);
    }
  }
}

TEST(Maio, MecCountNonIncreasingInIterations) {
  const auto p0 = reference_instance(7, 0.5);
  int prev = static_cast<int>(p0.layout.macro_sites.size()) + 1;  // infeasible ranks last
  for (int mi : {1, 10, 50, 100}) {
    auto p = p0;
    p.max_iterations = mi;
    const auto s = maio_optimize(p);
    const int count = s.status == MaioStatus::Infeasible ? prev : static_cast<int>(s.enabled_mecs.size());
    EXPECT_LE(count, prev) << "max_iterations " << mi;
    prev = count;
  }
}

TEST(Maio, IterationBudgetRespected) {
  auto p = reference_instance(7, 0.5);
  p.max_iterations = 3;
  const auto s = maio_optimize(p);
  const int counts = static_cast<int>(p.layout.macro_sites.size()) - s.n_mec_lower_bound + 1;
  EXPECT_LE(s.iterations_used, 3 * counts);
}

TEST(Maio, Deterministic) {
  const auto p = reference_instance(3, 0.5);
  const auto a = maio_optimize(p);
  const auto b = maio_optimize(p);
  EXPECT_EQ(a.enabled_mecs, b.enabled_mecs);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.cuts_added, b.cuts_added);
}

TEST(Maio, UnreachableThresholdIsReachabilityInfeasible) {
  auto p = crowded_pair(0.3);
  p.threshold_us = 1.0;
  const auto s = maio_optimize(p);
  EXPECT_EQ(s.status, MaioStatus::Infeasible);
  EXPECT_EQ(s.reason, InfeasibleReason::Reachability);
}

TEST(Maio, CentralOfficeNeverReachableByDefault) {
  const auto p = reference_instance(7, 0.3);
  const auto m = build_ilp(p);
  for (const auto& sites : m.reachable) {
    EXPECT_EQ(std::count(sites.begin(), sites.end(), m.co_site()), 0);
  }
}

TEST(Maio, SimulatedOracleRun) {
  auto p = crowded_pair(0.9);
  p.oracle = OracleKind::Simulated;
  p.sim.measured_frames = 10000;
  const auto s = maio_optimize(p);
  EXPECT_EQ(s.status, MaioStatus::Optimal);
  EXPECT_EQ(s.enabled_mecs.size(), 2u);
  for (const auto& sr : s.slices) {
    if (!sr.slice.members.empty()) EXPECT_EQ(sr.latency.source, LatencySource::Simulated);
  }
}

TEST(Maio, RejectsBadProblems) {
  auto p = crowded_pair(0.5);
  p.max_iterations = 0;
  EXPECT_THROW(maio_optimize(p), ConfigError);
  p = crowded_pair(0.5);
  p.threshold_us = 0.0;
  EXPECT_THROW(maio_optimize(p), ConfigError);
}

TEST(EvaluateSolution, EmptySolutionEmptyReport) {
  const SimulatedOracle oracle{SimConfig{}};
  EXPECT_TRUE(evaluate_solution(MaioSolution{}, oracle, 100.0).empty());
}

TEST(EvaluateSolution, HalfLoadSolutionHoldsUnderSimulation) {
  const auto p = reference_instance(7, 0.5);
  const auto s = maio_optimize(p);
  ASSERT_NE(s.status, MaioStatus::Infeasible);
  SimConfig c;
  c.measured_frames = 10000;
  const auto report = evaluate_solution(s, SimulatedOracle{c}, p.threshold_us);
  EXPECT_FALSE(report.empty());
  for (std::size_t i = 0; i < report.size(); ++i) {
    EXPECT_FALSE(report[i].unstable);
    EXPECT_LE(report[i].simulated.mean_us, p.threshold_us + std::max(0.1 * p.threshold_us, 5.0));
  }
}

TEST(EvaluateSolution, OverPackedSliceIsFlagged) {
  const auto p = crowded_pair(0.9);
  MaioSolution s;
  std::vector<int> ids;
  for (const auto& c : p.layout.small_cells) ids.push_back(c.id);
  SliceResult sr;
  sr.slice = make_slice(p.layout, p.traffic, OltSite{0}, ids);
  s.slices.push_back(sr);
  const auto report = evaluate_solution(s, SimulatedOracle{SimConfig{}}, 100.0);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_TRUE(report[0].violates);
}
