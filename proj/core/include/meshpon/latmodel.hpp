#pragma once

#include <string_view>

#include "meshpon/despon.hpp"
#include "meshpon/slice.hpp"

namespace meshpon {

/// Which closed-form approximation analytic_latency evaluates.
///
/// Mg1Vacation: propagation + T/2 + M/G/1 wait + serialization.
/// GatedCycle:  Mg1Vacation plus the mean in-cycle transmission offset of a
///              gated TDMA cycle, rho_raw * T / 2 + (n - 1) * guard / 2,
///              i.e. the time a frame waits for earlier bursts and earlier
///              frames of its own burst once its cycle has started.
enum class LatencyModel { Mg1Vacation, GatedCycle };

std::string_view to_string(LatencyModel model);
LatencyModel latency_model_from_string(std::string_view text);

struct AnalyticalParams {
  double channel_rate_bps = 50e9;
  double grant_cycle_us = 62.5;
  double guard_time_us = 0.5;
  double packet_bits = 8000.0;
  double propagation_us_per_km = 5.0;
  LatencyModel model = LatencyModel::GatedCycle;

  static AnalyticalParams from(const SimConfig& config,
                               LatencyModel model = LatencyModel::GatedCycle);
  /// Fraction of a grant cycle lost to guard times for n bursts.
  double guard_overhead(int n_bursts) const;
};

/// Per-wavelength decomposition of the mean upstream latency, in us.
struct LatencyTerms {
  double propagation_us = 0.0;    // slice-wide maximum member propagation
  double grant_wait_us = 0.0;     // T / 2
  double cycle_offset_us = 0.0;   // GatedCycle only
  double queueing_us = 0.0;       // lambda * E[S^2] / (2 (1 - rho))
  double serialization_us = 0.0;
  double utilization = 0.0;       // guard-discounted

  double total_us() const {
    return propagation_us + grant_wait_us + cycle_offset_us + queueing_us + serialization_us;
  }
};

/// Terms for each slice wavelength (same order as slice.wavelengths).
/// Throws UnstableError when a wavelength's utilization reaches 1.
std::vector<LatencyTerms> analytic_terms(const VPonSlice& slice, const AnalyticalParams& params);

/// Mean upstream latency of the slice, frame-rate weighted over its
/// wavelengths, with the maximum member propagation delay. Throws
/// UnstableError when any wavelength's utilization reaches 1 and
/// std::invalid_argument for an empty slice.
LatencyEstimate analytic_latency(const VPonSlice& slice, const AnalyticalParams& params);

/// Homogeneous-load slice of n71 split-7.1 and n72 split-7.2 RUs, all at
/// distance_km, on n_wavelengths. RU ids run 7.1 first, then 7.2.
VPonSlice composed_slice(int n71, int n72, double load, double distance_km = 1.0,
                         int n_wavelengths = 1);

/// True iff the composed slice is stable and its analytical mean latency
/// is <= threshold_us. The empty slice counts as feasible.
bool max_members_feasible(int n71, int n72, double load, double threshold_us,
                          const AnalyticalParams& params, double distance_km = 1.0,
                          int n_wavelengths = 1);

}  // namespace meshpon
