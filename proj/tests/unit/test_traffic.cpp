#include <gtest/gtest.h>

#include "meshpon/topology.hpp"
#include "meshpon/traffic.hpp"

using namespace meshpon;

TEST(Traffic, Split71Endpoints) {
  const auto m = SplitRateModel::split71();
  EXPECT_DOUBLE_EQ(fronthaul_rate_bps(m, 0.0), 1.378e9);
  EXPECT_DOUBLE_EQ(fronthaul_rate_bps(m, 1.0), 7.384e9);
}

TEST(Traffic, Split72Midpoint) {
  EXPECT_NEAR(fronthaul_rate_bps(SplitRateModel::split72(), 0.5), 1.59699e9, 1.0);
}

TEST(Traffic, RejectsLoadOutsideUnitInterval) {
  const auto m = SplitRateModel::split72();
  EXPECT_THROW(fronthaul_rate_bps(m, -0.01), std::invalid_argument);
  EXPECT_THROW(fronthaul_rate_bps(m, 1.01), std::invalid_argument);
}

TEST(Traffic, RateMonotoneInLoad) {
  for (auto split : {SplitKind::Split71, SplitKind::Split72}) {
    const auto m = SplitRateModel::for_split(split);
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double r = fronthaul_rate_bps(m, i / 100.0);
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
}

TEST(Traffic, UniformProfileCoversLayout) {
  const auto l = generate_layout(2, 3, 20, 5, 5);
  const auto t = TrafficProfile::uniform(l, 0.7);
  ASSERT_EQ(t.per_ru.size(), l.small_cells.size());
  for (const auto& c : l.small_cells) {
    EXPECT_EQ(t.ru(c.id).split, c.split);
    EXPECT_DOUBLE_EQ(t.rate_bps(c.id), fronthaul_rate_bps(SplitRateModel::for_split(c.split), 0.7));
  }
  EXPECT_THROW(t.ru(10'000), std::out_of_range);
}

TEST(Traffic, ZeroArrivalRateHoldsLoad) {
  RuTraffic ru;
  ru.load = 0.37;
  ru.arrival_rate = 0.0;
  const auto trace = evolve_load(ru, 100, 5, 50.0);
  for (const auto& s : trace) EXPECT_DOUBLE_EQ(s.load, 0.37);
  EXPECT_DOUBLE_EQ(time_average_load(trace), 0.37);
}

TEST(Traffic, StationaryMeanLoad) {
  RuTraffic ru;
  ru.load = 0.0;
  ru.arrival_rate = 40.0;
  ru.mean_holding_time_s = 1.0;
  const auto trace = evolve_load(ru, 100, 2024, 2500.0);
  ASSERT_GE(trace.size(), 100'000u);
  // M/M/inf: mean active = lambda / mu
  EXPECT_NEAR(time_average_load(trace), 0.4, 0.4 * 0.05);
}

TEST(Traffic, LoadTraceDeterministicAndBounded) {
  RuTraffic ru;
  ru.load = 0.9;
  ru.arrival_rate = 150.0;
  ru.mean_holding_time_s = 1.0;
  const auto a = evolve_load(ru, 100, 9, 100.0);
  const auto b = evolve_load(ru, 100, 9, 100.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].time_s, b[i].time_s);
    EXPECT_EQ(a[i].load, b[i].load);
    EXPECT_GE(a[i].load, 0.0);
    EXPECT_LE(a[i].load, 1.0);
  }
}

TEST(Traffic, RejectsNonPositiveHorizon) {
  RuTraffic ru;
  ru.arrival_rate = 1.0;
  EXPECT_THROW(evolve_load(ru, 100, 1, 0.0), std::invalid_argument);
}
