#pragma once

#include <cstdint>
#include <vector>

#include "meshpon/types.hpp"

namespace meshpon {

struct NetworkLayout;

enum class RateInterpolation { Linear };

/// Fronthaul bit-rate envelope of one functional split. The defaults are
/// for a 100 MHz cell with four antennas and four MIMO layers.
struct SplitRateModel {
  SplitKind split = SplitKind::Split72;
  double rate_min_bps = 0.0;
  double rate_max_bps = 0.0;
  RateInterpolation interpolation = RateInterpolation::Linear;

  static SplitRateModel split71();
  static SplitRateModel split72();
  static SplitRateModel for_split(SplitKind split);
};

/// Throws std::invalid_argument when load is outside [0, 1].
double fronthaul_rate_bps(const SplitRateModel& model, double load);

struct RuTraffic {
  int ru_id = 0;
  SplitKind split = SplitKind::Split72;
  double load = 0.5;
  // connection-level birth/death process (dynamic mode)
  double arrival_rate = 0.0;        // connections per second
  double mean_holding_time_s = 1.0;
};

struct TrafficProfile {
  std::vector<RuTraffic> per_ru;
  int max_connections = 100;

  /// Every small cell of the layout at the same load, with its own split.
  static TrafficProfile uniform(const NetworkLayout& layout, double load);

  const RuTraffic& ru(int ru_id) const;
  double rate_bps(int ru_id) const;
};

struct LoadSample {
  double time_s = 0.0;
  double load = 0.0;
};

/// Connection birth/death trace (Poisson arrivals, exponential holding)
/// normalized by max_connections and clamped to [0, 1]. One sample per
/// event, starting with the initial load at t = 0 and closing at horizon.
/// With arrival_rate == 0 the load is held constant.
std::vector<LoadSample> evolve_load(const RuTraffic& ru, int max_connections,
                                    std::uint64_t seed, double horizon_s);

/// Time-weighted mean of a piecewise-constant load trace.
double time_average_load(const std::vector<LoadSample>& trace);

}  // namespace meshpon
