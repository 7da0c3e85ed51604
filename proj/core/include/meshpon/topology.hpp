#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "meshpon/types.hpp"

namespace meshpon {

struct SplitterSpec {
  int ports_in = 4;
  int ports_out = 16;
  double one_way_loss_db = 14.03;
  bool amplified = false;
  double edfa_gain_db = 0.0;
};

/// Candidate MEC location; every macro site hosts one level-1 splitter.
struct MacroSite {
  int id = 0;
  Point position;
  int mec_capacity = 1;
  SplitterSpec level1_splitter;
  int level2_id = 0;
  double fiber_to_level2_km = 0.0;
  // drop from the MEC's OLT to its own level-1 splitter
  double mec_drop_km = 0.5;
};

struct SmallCell {
  int id = 0;
  Point position;
  int parent_macro = 0;
  double fiber_to_level1_km = 0.0;
  SplitKind split = SplitKind::Split72;
};

struct Level2Splitter {
  int id = 0;
  Point position;
  SplitterSpec spec;
};

struct NetworkLayout {
  double area_width_km = 0.0;
  double area_height_km = 0.0;
  std::vector<MacroSite> macro_sites;
  std::vector<SmallCell> small_cells;
  std::vector<Level2Splitter> level2_splitters;
  // fiber from any level-2 splitter up to the central office
  double co_fiber_km = 20.0;
  double fiber_routing_factor = 1.0;
  int level2_fanout = 4;
  std::uint64_t seed = 0;

  const MacroSite& macro(int id) const;
  const SmallCell& cell(int id) const;
};

/// Knobs for generate_layout. Distances are derived from geometry
/// (Euclidean times the routing factor) and floored at min_fiber_km.
struct LayoutParams {
  double fiber_routing_factor = 1.0;
  int level2_fanout = 4;
  int mec_capacity = 16;
  double mec_drop_km = 0.5;
  double co_fiber_km = 20.0;
  double split71_fraction = 0.5;
  double min_fiber_km = 0.01;
  SplitterSpec level1_splitter{4, 16, 14.03, false, 0.0};
  SplitterSpec level2_splitter{4, 4, 7.3, true, 23.0};
};

NetworkLayout generate_layout(std::uint64_t seed, int n_macro, int n_small,
                              double width_km, double height_km,
                              const LayoutParams& params = {});

/// Throws std::invalid_argument describing the first broken invariant.
void validate_layout(const NetworkLayout& layout);

/// One-way EAST-WEST fiber path between a small cell's ONU and the OLT at a
/// macro site. Same level-1 tree: drop + MEC drop. Same level-2 tree: the
/// path is reflected at the level-2 splitter. Different level-2 trees have
/// no EAST-WEST path and yield nullopt.
std::optional<double> east_west_distance_km(const NetworkLayout& layout,
                                            const SmallCell& ru,
                                            const MacroSite& mec);

/// NORTH-SOUTH path from a small cell up to the central office.
double co_distance_km(const NetworkLayout& layout, const SmallCell& ru);

/// Index of the macro site nearest to p (ties go to the lower id).
int nearest_macro(const std::vector<MacroSite>& sites, const Point& p);

}  // namespace meshpon
