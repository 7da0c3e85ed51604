#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "meshpon/types.hpp"

namespace meshpon {

struct NetworkLayout;
struct TrafficProfile;

/// OLT endpoint of a slice: a macro site's MEC, or the central office.
struct OltSite {
  static constexpr int kCentralOffice = -1;
  int macro_id = kCentralOffice;

  bool is_co() const { return macro_id == kCentralOffice; }
  friend bool operator==(const OltSite&, const OltSite&) = default;
  friend auto operator<=>(const OltSite&, const OltSite&) = default;
};

struct SliceMember {
  int ru_id = 0;
  SplitKind split = SplitKind::Split72;
  double distance_km = 0.0;
  double rate_bps = 0.0;
};

/// A virtual PON: RU-ONUs bound to one OLT site over a set of wavelengths.
struct VPonSlice {
  OltSite olt;
  std::vector<SliceMember> members;
  std::vector<int> wavelengths{0};

  double offered_bps() const;
  double max_distance_km() const;
};

/// Static least-loaded member-to-wavelength mapping: members in id order,
/// each placed on the wavelength with the smallest offered rate so far
/// (ties to the lower wavelength index). Returns wavelength index per member.
std::vector<int> map_members_to_wavelengths(const VPonSlice& slice);

enum class LatencySource { Simulated, Analytical };
std::string_view to_string(LatencySource source);

struct LatencyEstimate {
  double mean_us = 0.0;
  double p99_us = 0.0;  // analytical estimates report 0
  std::int64_t frames_measured = 0;
  LatencySource source = LatencySource::Analytical;
  // highest guard-discounted utilization over the slice's wavelengths
  double max_utilization = 0.0;
};

/// Builds the slice served at `olt` from RU ids, looking up fiber distances
/// in the layout and fronthaul rates in the traffic profile. Members end
/// up sorted by RU id.
VPonSlice make_slice(const NetworkLayout& layout, const TrafficProfile& traffic, OltSite olt,
                     const std::vector<int>& ru_ids, int n_wavelengths = 1);

/// Fiber distance RU -> OLT site, or a negative value when no path exists.
double olt_distance_km(const NetworkLayout& layout, int ru_id, OltSite olt);

}  // namespace meshpon
