#include "meshpon/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace meshpon {

std::string_view to_string(SplitKind split) {
  return split == SplitKind::Split71 ? "7.1" : "7.2";
}

SplitKind split_from_string(std::string_view text) {
  if (text == "7.1" || text == "split71" || text == "Split71") return SplitKind::Split71;
  if (text == "7.2" || text == "split72" || text == "Split72") return SplitKind::Split72;
  throw ConfigError("unknown functional split '" + std::string(text) + "'");
}

double euclidean_km(const Point& a, const Point& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

UnstableError::UnstableError(double rho, int wavelength)
    : std::runtime_error("unstable slice: utilization " + std::to_string(rho) +
                         " on wavelength " + std::to_string(wavelength)),
      rho_(rho),
      wavelength_(wavelength) {}

const MacroSite& NetworkLayout::macro(int id) const {
  auto it = std::find_if(macro_sites.begin(), macro_sites.end(),
                         [id](const MacroSite& m) { return m.id == id; });
  if (it == macro_sites.end()) {
    throw std::out_of_range("no macro site with id " + std::to_string(id));
  }
  return *it;
}

const SmallCell& NetworkLayout::cell(int id) const {
  auto it = std::find_if(small_cells.begin(), small_cells.end(),
                         [id](const SmallCell& c) { return c.id == id; });
  if (it == small_cells.end()) {
    throw std::out_of_range("no small cell with id " + std::to_string(id));
  }
  return *it;
}

int nearest_macro(const std::vector<MacroSite>& sites, const Point& p) {
  int best = -1;
  double best_d = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double d = euclidean_km(sites[i].position, p);
    if (best < 0 || d < best_d || (d == best_d && sites[i].id < sites[best].id)) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

NetworkLayout generate_layout(std::uint64_t seed, int n_macro, int n_small,
                              double width_km, double height_km,
                              const LayoutParams& params) {
  if (!(width_km > 0.0) || !(height_km > 0.0)) {
    throw std::invalid_argument("layout area must be positive");
  }
  if (n_macro < 1) throw std::invalid_argument("n_macro must be at least 1");
  if (n_small < n_macro) throw std::invalid_argument("n_small must be >= n_macro");
  if (params.level2_fanout < 1) throw std::invalid_argument("level2_fanout must be >= 1");
  if (params.fiber_routing_factor < 1.0) {
    throw std::invalid_argument("fiber_routing_factor must be >= 1");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width_km);
  std::uniform_real_distribution<double> uy(0.0, height_km);
  std::bernoulli_distribution is71(params.split71_fraction);

  NetworkLayout layout;
  layout.area_width_km = width_km;
  layout.area_height_km = height_km;
  layout.co_fiber_km = params.co_fiber_km;
  layout.fiber_routing_factor = params.fiber_routing_factor;
  layout.level2_fanout = params.level2_fanout;
  layout.seed = seed;

  layout.macro_sites.reserve(n_macro);
  for (int i = 0; i < n_macro; ++i) {
    MacroSite m;
    m.id = i;
    m.position = {ux(rng), uy(rng)};
    m.mec_capacity = params.mec_capacity;
    m.level1_splitter = params.level1_splitter;
    m.mec_drop_km = params.mec_drop_km;
    layout.macro_sites.push_back(m);
  }

  // Group macro sites under level-2 splitters in a west-to-east sweep so
  // that trees are spatially compact.
  std::vector<int> order(n_macro);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = layout.macro_sites[a].position;
    const auto& pb = layout.macro_sites[b].position;
    return pa.x_km != pb.x_km ? pa.x_km < pb.x_km : pa.y_km < pb.y_km;
  });
  const int n_level2 = (n_macro + params.level2_fanout - 1) / params.level2_fanout;
  for (int t = 0; t < n_level2; ++t) {
    Level2Splitter l2;
    l2.id = t;
    l2.spec = params.level2_splitter;
    const int lo = t * params.level2_fanout;
    const int hi = std::min(n_macro, lo + params.level2_fanout);
    for (int k = lo; k < hi; ++k) {
      l2.position.x_km += layout.macro_sites[order[k]].position.x_km;
      l2.position.y_km += layout.macro_sites[order[k]].position.y_km;
      layout.macro_sites[order[k]].level2_id = t;
    }
    l2.position.x_km /= (hi - lo);
    l2.position.y_km /= (hi - lo);
    layout.level2_splitters.push_back(l2);
  }
  for (auto& m : layout.macro_sites) {
    const auto& l2 = layout.level2_splitters[m.level2_id];
    m.fiber_to_level2_km = std::max(params.min_fiber_km,
                                    euclidean_km(m.position, l2.position) *
                                        params.fiber_routing_factor);
  }

  layout.small_cells.reserve(n_small);
  for (int i = 0; i < n_small; ++i) {
    SmallCell c;
    c.id = i;
    c.position = {ux(rng), uy(rng)};
    c.split = is71(rng) ? SplitKind::Split71 : SplitKind::Split72;
    const int parent = nearest_macro(layout.macro_sites, c.position);
    c.parent_macro = layout.macro_sites[parent].id;
    c.fiber_to_level1_km =
        std::max(params.min_fiber_km,
                 euclidean_km(c.position, layout.macro_sites[parent].position) *
                     params.fiber_routing_factor);
    layout.small_cells.push_back(c);
  }
  return layout;
}

void validate_layout(const NetworkLayout& layout) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(layout.area_width_km > 0.0) || !(layout.area_height_km > 0.0)) {
    fail("layout area must be positive");
  }
  if (layout.macro_sites.empty()) fail("layout has no macro sites");
  auto inside = [&](const Point& p) {
    return p.x_km >= 0.0 && p.x_km <= layout.area_width_km && p.y_km >= 0.0 &&
           p.y_km <= layout.area_height_km;
  };
  for (const auto& m : layout.macro_sites) {
    const std::string tag = "macro " + std::to_string(m.id);
    if (!inside(m.position)) fail(tag + " lies outside the area");
    if (m.mec_capacity < 1) fail(tag + " has mec_capacity < 1");
    if (!(m.fiber_to_level2_km > 0.0)) fail(tag + " has non-positive fiber_to_level2_km");
    if (!(m.mec_drop_km > 0.0)) fail(tag + " has non-positive mec_drop_km");
    const auto& s = m.level1_splitter;
    if (!(s.one_way_loss_db > 0.0)) fail(tag + " splitter loss must be positive");
    if (s.edfa_gain_db < 0.0) fail(tag + " splitter EDFA gain must be >= 0");
    if (!s.amplified && s.edfa_gain_db != 0.0) fail(tag + " unamplified splitter has EDFA gain");
    const bool has_l2 = std::any_of(layout.level2_splitters.begin(), layout.level2_splitters.end(),
                                    [&](const Level2Splitter& l) { return l.id == m.level2_id; });
    if (!has_l2) fail(tag + " references missing level-2 splitter");
  }
  for (const auto& c : layout.small_cells) {
    const std::string tag = "small cell " + std::to_string(c.id);
    if (!inside(c.position)) fail(tag + " lies outside the area");
    if (!(c.fiber_to_level1_km > 0.0)) fail(tag + " has non-positive fiber_to_level1_km");
    const bool has_parent = std::any_of(layout.macro_sites.begin(), layout.macro_sites.end(),
                                        [&](const MacroSite& m) { return m.id == c.parent_macro; });
    if (!has_parent) fail(tag + " references missing parent macro");
  }
  if (!(layout.co_fiber_km > 0.0)) fail("co_fiber_km must be positive");
  if (layout.fiber_routing_factor < 1.0) fail("fiber_routing_factor must be >= 1");
}

std::optional<double> east_west_distance_km(const NetworkLayout& layout,
                                            const SmallCell& ru,
                                            const MacroSite& mec) {
  if (ru.parent_macro == mec.id) {
    return ru.fiber_to_level1_km + mec.mec_drop_km;
  }
  const MacroSite& home = layout.macro(ru.parent_macro);
  if (home.level2_id != mec.level2_id) return std::nullopt;
  return ru.fiber_to_level1_km + home.fiber_to_level2_km + mec.fiber_to_level2_km +
         mec.mec_drop_km;
}

double co_distance_km(const NetworkLayout& layout, const SmallCell& ru) {
  const MacroSite& home = layout.macro(ru.parent_macro);
  return ru.fiber_to_level1_km + home.fiber_to_level2_km + layout.co_fiber_km;
}

}  // namespace meshpon
