#include <gtest/gtest.h>

#include "meshpon/io.hpp"
#include "meshpon/topology.hpp"

using namespace meshpon;

namespace {

// two macros on one level-2 tree, one small cell under macro 0
NetworkLayout two_macro_layout(double drop, double mec_drop, double trunk) {
  NetworkLayout l;
  l.area_width_km = 10;
  l.area_height_km = 10;
  for (int id = 0; id < 2; ++id) {
    MacroSite m;
    m.id = id;
    m.position = {1.0 + 5.0 * id, 1.0};
    m.mec_capacity = 4;
    m.level2_id = 0;
    m.fiber_to_level2_km = trunk;
    m.mec_drop_km = mec_drop;
    l.macro_sites.push_back(m);
  }
  SmallCell c;
  c.id = 0;
  c.position = {1.2, 1.0};
  c.parent_macro = 0;
  c.fiber_to_level1_km = drop;
  l.small_cells.push_back(c);
  l.level2_splitters.push_back({0, {3.5, 1.0}, {}});
  return l;
}

}  // namespace

TEST(Topology, SingleMacroTakesSingleCell) {
  const auto l = generate_layout(1, 1, 1, 10, 10);
  ASSERT_EQ(l.small_cells.size(), 1u);
  EXPECT_EQ(l.small_cells[0].parent_macro, l.macro_sites[0].id);
}

TEST(Topology, EveryCellHasItsNearestMacro) {
  const auto l = generate_layout(7, 7, 60, 10, 10);
  for (const auto& c : l.small_cells) {
    const double own = euclidean_km(c.position, l.macro(c.parent_macro).position);
    for (const auto& m : l.macro_sites) {
      EXPECT_LE(own, euclidean_km(c.position, m.position)) << "cell " << c.id;
    }
  }
}

TEST(Topology, SameSeedSameBytes) {
  const auto a = to_json(generate_layout(42, 5, 40, 8, 6)).dump();
  const auto b = to_json(generate_layout(42, 5, 40, 8, 6)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, to_json(generate_layout(43, 5, 40, 8, 6)).dump());
}

TEST(Topology, RejectsBadArguments) {
  EXPECT_THROW(generate_layout(1, 0, 5, 10, 10), std::invalid_argument);
  EXPECT_THROW(generate_layout(1, 2, 5, 0, 10), std::invalid_argument);
  EXPECT_THROW(generate_layout(1, 3, 2, 10, 10), std::invalid_argument);
}

TEST(Topology, GeneratedLayoutValidates) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto l = generate_layout(seed, 6, 50, 7, 9);
    EXPECT_NO_THROW(validate_layout(l));
    for (const auto& c : l.small_cells) {
      EXPECT_GE(c.position.x_km, 0.0);
      EXPECT_LE(c.position.x_km, 7.0);
      EXPECT_GE(c.position.y_km, 0.0);
      EXPECT_LE(c.position.y_km, 9.0);
    }
  }
}

TEST(Topology, FiberFollowsRoutingFactor) {
  LayoutParams p;
  p.fiber_routing_factor = 1.5;
  const auto l = generate_layout(3, 4, 30, 10, 10, p);
  for (const auto& c : l.small_cells) {
    const double e = euclidean_km(c.position, l.macro(c.parent_macro).position);
    EXPECT_NEAR(c.fiber_to_level1_km, std::max(e * 1.5, p.min_fiber_km), 1e-12);
  }
}

TEST(Topology, SameSplitterDistance) {
  const auto l = two_macro_layout(0.5, 0.5, 10);
  EXPECT_DOUBLE_EQ(*east_west_distance_km(l, l.small_cells[0], l.macro(0)), 1.0);
}

TEST(Topology, ViaLevel2Distance) {
  const auto l = two_macro_layout(0.5, 0.5, 10);
  EXPECT_DOUBLE_EQ(*east_west_distance_km(l, l.small_cells[0], l.macro(1)), 21.0);
}

TEST(Topology, ZeroLengthPath) {
  const auto l = two_macro_layout(0.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(*east_west_distance_km(l, l.small_cells[0], l.macro(0)), 0.0);
  EXPECT_DOUBLE_EQ(*east_west_distance_km(l, l.small_cells[0], l.macro(1)), 0.0);
}

TEST(Topology, DifferentTreesHaveNoEastWestPath) {
  auto l = two_macro_layout(0.5, 0.5, 10);
  l.macro_sites[1].level2_id = 1;
  l.level2_splitters.push_back({1, {6, 1}, {}});
  EXPECT_FALSE(east_west_distance_km(l, l.small_cells[0], l.macro(1)).has_value());
}

TEST(Topology, CentralOfficeDistance) {
  const auto l = two_macro_layout(0.5, 0.5, 10);
  EXPECT_DOUBLE_EQ(co_distance_km(l, l.small_cells[0]), 0.5 + 10 + 20);
}

TEST(Topology, PathLengthIsSymmetric) {
  // reversed segment order: MEC drop, trunk', trunk, RU drop
  const auto l = generate_layout(11, 6, 40, 6, 6);
  for (const auto& c : l.small_cells) {
    for (const auto& m : l.macro_sites) {
      const auto d = east_west_distance_km(l, c, m);
      if (!d) continue;
      const auto& own = l.macro(c.parent_macro);
      double reverse = m.mec_drop_km;
      if (m.id != own.id) reverse += m.fiber_to_level2_km + own.fiber_to_level2_km;
      reverse += c.fiber_to_level1_km;
      EXPECT_NEAR(*d, reverse, 1e-12);
    }
  }
}

TEST(Topology, SameTreeShorterThanCrossTree) {
  const auto l = generate_layout(5, 8, 60, 10, 10);
  for (const auto& c : l.small_cells) {
    const double home = *east_west_distance_km(l, c, l.macro(c.parent_macro));
    for (const auto& m : l.macro_sites) {
      if (m.id == c.parent_macro) continue;
      const auto d = east_west_distance_km(l, c, m);
      if (d) EXPECT_LT(home, *d);
    }
  }
}

TEST(Topology, NearestMacroTiesGoToLowerId) {
  std::vector<MacroSite> sites(2);
  sites[0].id = 4;
  sites[0].position = {0, 0};
  sites[1].id = 2;
  sites[1].position = {2, 0};
  EXPECT_EQ(sites[nearest_macro(sites, {1, 0})].id, 2);
}
