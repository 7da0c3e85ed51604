#include "meshpon/slice.hpp"

#include <algorithm>
#include <stdexcept>

#include "meshpon/topology.hpp"
#include "meshpon/traffic.hpp"

namespace meshpon {

double VPonSlice::offered_bps() const {
  double sum = 0.0;
  for (const auto& m : members) sum += m.rate_bps;
  return sum;
}

double VPonSlice::max_distance_km() const {
  double d = 0.0;
  for (const auto& m : members) d = std::max(d, m.distance_km);
  return d;
}

std::vector<int> map_members_to_wavelengths(const VPonSlice& slice) {
  if (slice.wavelengths.empty()) throw std::invalid_argument("slice has no wavelengths");
  std::vector<int> order(slice.members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return slice.members[a].ru_id < slice.members[b].ru_id;
  });
  std::vector<double> load(slice.wavelengths.size(), 0.0);
  std::vector<int> mapping(slice.members.size(), 0);
  for (int idx : order) {
    const auto w = static_cast<int>(std::min_element(load.begin(), load.end()) - load.begin());
    mapping[idx] = w;
    load[w] += slice.members[idx].rate_bps;
  }
  return mapping;
}

std::string_view to_string(LatencySource source) {
  return source == LatencySource::Simulated ? "simulated" : "analytical";
}

double olt_distance_km(const NetworkLayout& layout, int ru_id, OltSite olt) {
  const SmallCell& ru = layout.cell(ru_id);
  if (olt.is_co()) return co_distance_km(layout, ru);
  auto d = east_west_distance_km(layout, ru, layout.macro(olt.macro_id));
  return d ? *d : -1.0;
}

VPonSlice make_slice(const NetworkLayout& layout, const TrafficProfile& traffic, OltSite olt,
                     const std::vector<int>& ru_ids, int n_wavelengths) {
  if (n_wavelengths < 1) throw std::invalid_argument("a slice needs at least one wavelength");
  VPonSlice slice;
  slice.olt = olt;
  slice.wavelengths.clear();
  for (int w = 0; w < n_wavelengths; ++w) slice.wavelengths.push_back(w);
  std::vector<int> ids = ru_ids;
  std::sort(ids.begin(), ids.end());
  for (int id : ids) {
    const double d = olt_distance_km(layout, id, olt);
    if (d < 0.0) {
      throw std::invalid_argument("RU " + std::to_string(id) + " has no path to the OLT site");
    }
    SliceMember m;
    m.ru_id = id;
    m.split = traffic.ru(id).split;
    m.distance_km = d;
    m.rate_bps = traffic.rate_bps(id);
    slice.members.push_back(m);
  }
  return slice;
}

}  // namespace meshpon
