#include <gtest/gtest.h>

#include <sstream>

#include "meshpon/io.hpp"

using namespace meshpon;

TEST(Io, LayoutRoundTrip) {
  const auto l = generate_layout(4, 4, 25, 6, 6);
  const auto doc = to_json(l);
  const auto back = layout_from_json(Json::parse(doc.dump()));
  EXPECT_EQ(to_json(back).dump(), doc.dump());
}

TEST(Io, LayoutMissingFieldIsConfigError) {
  auto doc = to_json(generate_layout(4, 2, 5, 6, 6));
  doc.erase("small_cells");
  EXPECT_THROW(layout_from_json(doc), ConfigError);
  auto bad = to_json(generate_layout(4, 2, 5, 6, 6));
  bad["small_cells"][0]["parent_macro"] = 999;
  EXPECT_THROW(layout_from_json(bad), ConfigError);
}

TEST(Io, SliceFromLoadsAndCounts) {
  const auto doc = Json::parse(R"({
    "olt": 3, "wavelengths": 2,
    "members": [{"split": "7.1", "distance_km": 1.5, "load": 0.0},
                {"split": "7.2", "distance_km": 2.0, "rate_bps": 1e9}]})");
  const auto s = slice_from_json(doc);
  EXPECT_EQ(s.olt.macro_id, 3);
  EXPECT_EQ(s.wavelengths, (std::vector<int>{0, 1}));
  ASSERT_EQ(s.members.size(), 2u);
  EXPECT_EQ(s.members[1].ru_id, 1);
  EXPECT_DOUBLE_EQ(s.members[0].rate_bps, 1.378e9);
  EXPECT_DOUBLE_EQ(s.members[1].rate_bps, 1e9);
  EXPECT_EQ(slice_from_json(to_json(s)).members.size(), 2u);
}

TEST(Io, SliceErrors) {
  EXPECT_THROW(slice_from_json(Json::parse(R"({"members": []})")), ConfigError);
  EXPECT_THROW(slice_from_json(Json::parse(R"({"olt": "HQ", "members": [{"distance_km": 1, "load": 0.1}]})")),
               ConfigError);
  EXPECT_THROW(slice_from_json(Json::parse(R"({"members": [{"load": 0.1}]})")), ConfigError);
}

TEST(Io, SimConfigOverlay) {
  SimConfig base;
  base.seed = 9;
  const auto c = sim_config_from_json(Json::parse(R"({"grant_cycle_us": 125})"), base);
  EXPECT_DOUBLE_EQ(c.grant_cycle_us, 125);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_THROW(sim_config_from_json(Json::parse(R"({"packet_bits": -1})")), ConfigError);
  EXPECT_THROW(sim_config_from_json(Json::parse(R"({"packet_bits": "big"})")), ConfigError);
}

TEST(Io, BudgetCsvHasEveryRow) {
  std::ostringstream out;
  write_budget_csv(out, budget_table(default_splitter_configs(), BudgetParams{}));
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_NE(csv.find("24.80"), std::string::npos);
  EXPECT_NE(csv.find("58.86"), std::string::npos);
}

TEST(Io, IterationLogCsv) {
  std::ostringstream out;
  write_iteration_log_csv(out, {{1, 5, 5, 2, 2, false, 0.5}, {2, 5, 5, 0, 2, true, 0.75}});
  EXPECT_EQ(out.str(),
            "iteration,bound,mec_count,violations,cuts_total,feasible,elapsed_s\n"
            "1,5,5,2,2,0,0.5\n2,5,5,0,2,1,0.75\n");
}
