#include <gtest/gtest.h>

#include <cmath>

#include "meshpon/despon.hpp"
#include "meshpon/latmodel.hpp"

using namespace meshpon;

namespace {

VPonSlice uniform_slice(int n, SplitKind split, double rate_bps, double km = 1.0, int nw = 1) {
  VPonSlice s;
  s.wavelengths.clear();
  for (int w = 0; w < nw; ++w) s.wavelengths.push_back(w);
  for (int i = 0; i < n; ++i) s.members.push_back({i, split, km, rate_bps});
  return s;
}

SimConfig quick(std::int64_t measured = 20000, std::uint64_t seed = 1) {
  SimConfig c;
  c.measured_frames = measured;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Scheduler, SingleOnuUnderCapacityGetsDemand) {
  const CycleState cycle;
  const std::vector<OnuDemand> d{{0, 1e5}};
  const auto g = scheduler_grant(cycle, d);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_DOUBLE_EQ(g[0].bits, 1e5);
  EXPECT_DOUBLE_EQ(g[0].start_us, cycle.start_us);
}

TEST(Scheduler, EqualDemandsOverCapacitySplitEvenly) {
  const CycleState cycle;
  const std::vector<OnuDemand> d{{1, 5e6}, {0, 5e6}};
  const auto g = scheduler_grant(cycle, d);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].onu, 0);
  EXPECT_EQ(g[1].onu, 1);
  EXPECT_DOUBLE_EQ(g[0].bits, g[1].bits);
  const double capacity = (cycle.cycle_us - 2 * cycle.guard_us) * cycle.rate_bps * 1e-6;
  EXPECT_NEAR(g[0].bits + g[1].bits, capacity, 1e-6);
}

TEST(Scheduler, ProportionalRule) {
  const std::vector<double> demands{3.0, 1.0};
  const auto s = proportional_shares(demands, 2.0);
  EXPECT_DOUBLE_EQ(s[0], 1.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
}

TEST(Scheduler, GrantsDoNotOverlapAndFitTheCycle) {
  CycleState cycle;
  cycle.start_us = 125.0;
  std::vector<OnuDemand> d;
  for (int i = 0; i < 7; ++i) d.push_back({i, 1e6 * (i + 1)});
  const auto g = scheduler_grant(cycle, d);
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_NEAR(g[i].start_us, g[i - 1].end_us + cycle.guard_us, 1e-9);
  }
  EXPECT_LE(g.back().end_us + cycle.guard_us, cycle.start_us + cycle.cycle_us + 1e-9);
}

TEST(Scheduler, WorkConserving) {
  // any capacity left over means every demand was met in full
  const CycleState cycle;
  const std::vector<OnuDemand> d{{0, 2e5}, {1, 0.0}, {2, 7e5}};
  const auto g = scheduler_grant(cycle, d);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_DOUBLE_EQ(g[0].bits, 2e5);
  EXPECT_DOUBLE_EQ(g[1].bits, 7e5);
}

TEST(Despon, LightSingleOnuBounds) {
  const auto s = uniform_slice(1, SplitKind::Split72, 1e7);
  const auto est = simulate_slice(s, quick(10000));
  const double floor = 5.0 + 0.16;
  EXPECT_GE(est.mean_us, floor);
  EXPECT_LE(est.mean_us, floor + 62.5);
  EXPECT_NEAR(est.mean_us, floor + 62.5 / 2, 3.0);
  EXPECT_GE(est.p99_us, est.mean_us);
}

TEST(Despon, ConservationAndLowerBound) {
  auto s = uniform_slice(8, SplitKind::Split71, 4e9);
  s.members[3].distance_km = 4.0;
  auto cfg = quick(20000);
  cfg.record_trace = true;
  const auto r = simulate_slice_detailed(s, cfg);
  EXPECT_EQ(r.frames_generated, r.frames_delivered + r.frames_in_flight);
  EXPECT_EQ(r.frames_in_flight, 0);
  EXPECT_EQ(r.measured_delivered, cfg.measured_frames);
  EXPECT_GE(r.min_slack_us, -1e-9);
  ASSERT_EQ(static_cast<std::int64_t>(r.trace.size()), cfg.measured_frames);
  for (const auto& f : r.trace) {
    EXPECT_GE(f.latency_us(), f.propagation_us + f.serialization_us - 1e-9);
  }
}

TEST(Despon, WarmupIsTenPercent) {
  SimConfig c;
  c.warmup_frames = 10;
  c.measured_frames = 90000;
  EXPECT_EQ(c.effective_warmup(), 10000);
  c.warmup_frames = 50000;
  EXPECT_EQ(c.effective_warmup(), 50000);
}

TEST(Despon, UnstableExactlyAtCapacity) {
  const SimConfig c;
  const int n = 2;
  const double capacity =
      c.channel_rate_bps * ((c.grant_cycle_us - n * c.guard_time_us) / c.grant_cycle_us);
  const auto at = uniform_slice(n, SplitKind::Split71, capacity / n);
  EXPECT_THROW(simulate_slice(at, quick(2000)), UnstableError);
  const auto below = uniform_slice(n, SplitKind::Split71, std::nextafter(capacity / n, 0.0));
  EXPECT_NO_THROW(check_stable(below, c));
  const auto over = uniform_slice(2, SplitKind::Split71, 30e9);
  try {
    simulate_slice(over, quick(2000));
    FAIL() << "expected UnstableError";
  } catch (const UnstableError& e) {
    EXPECT_GT(e.rho(), 1.0);
    EXPECT_EQ(e.wavelength(), 0);
  }
}

TEST(Despon, Deterministic) {
  const auto s = composed_slice(3, 5, 0.6);
  const auto a = simulate_slice(s, quick(15000, 77));
  const auto b = simulate_slice(s, quick(15000, 77));
  EXPECT_EQ(a.mean_us, b.mean_us);
  EXPECT_EQ(a.p99_us, b.p99_us);
  const auto c = simulate_slice(s, quick(15000, 78));
  EXPECT_NE(a.mean_us, c.mean_us);
}

TEST(Despon, MeanLatencyGrowsWithMembers) {
  for (std::uint64_t seed : {1, 2, 3}) {
    double prev = 0.0;
    for (int n = 1; n <= 16; ++n) {
      const auto s = composed_slice(0, n, 0.5);
      const double mean = simulate_slice(s, quick(20000, seed)).mean_us;
      EXPECT_GE(mean, prev - 1.0) << "n=" << n << " seed=" << seed;
      prev = mean;
    }
  }
}

TEST(Despon, SixteenSplit72HalfLoadMatchesModel) {
  SimConfig c = quick(50000, 5);
  const auto s = composed_slice(0, 16, 0.5);
  const double sim = simulate_slice(s, c).mean_us;
  const double ana = analytic_latency(s, AnalyticalParams::from(c)).mean_us;
  EXPECT_LE(std::abs(sim - ana), std::max(0.1 * sim, 5.0));
}

TEST(Despon, LeastLoadedMapping) {
  VPonSlice s;
  s.wavelengths = {0, 1};
  s.members = {{0, SplitKind::Split71, 1, 5e9},
               {1, SplitKind::Split72, 1, 1e9},
               {2, SplitKind::Split72, 1, 1e9},
               {3, SplitKind::Split72, 1, 1e9}};
  EXPECT_EQ(map_members_to_wavelengths(s), (std::vector<int>{0, 1, 1, 1}));
}

TEST(Despon, RejectsEmptySlice) {
  VPonSlice s;
  EXPECT_THROW(simulate_slice(s, quick()), std::invalid_argument);
}
