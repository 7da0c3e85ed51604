#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "meshpon/slice.hpp"

namespace meshpon {

struct SimConfig {
  double channel_rate_bps = 50e9;
  double grant_cycle_us = 62.5;
  double guard_time_us = 0.5;
  double packet_bits = 8000.0;
  double propagation_us_per_km = 5.0;
  std::int64_t warmup_frames = 1000;
  std::int64_t measured_frames = 20000;
  std::uint64_t seed = 1;
  bool record_trace = false;

  void validate() const;
  /// Frames discarded before measurement: 10% of the run, at least warmup_frames.
  std::int64_t effective_warmup() const;
};

// --- grant scheduling -------------------------------------------------------

struct CycleState {
  double start_us = 0.0;
  double cycle_us = 62.5;
  double guard_us = 0.5;
  double rate_bps = 50e9;
};

struct OnuDemand {
  int onu = 0;
  double bits = 0.0;
};

struct Grant {
  int onu = 0;
  double bits = 0.0;
  double start_us = 0.0;
  double end_us = 0.0;  // end of the data burst; the guard follows it
};

/// Splits `capacity` among demands: everything when it fits, otherwise in
/// proportion to demand. Sum of shares == min(sum of demands, capacity).
std::vector<double> proportional_shares(std::span<const double> demands, double capacity);

/// Cooperative DBA for one wavelength and one grant cycle. Demands are
/// known at cycle start. ONUs with zero demand get no burst; active ONUs
/// get one burst each, in ONU id order, separated by a guard time. Burst
/// sizes come from proportional_shares over the cycle capacity left after
/// the guards.
std::vector<Grant> scheduler_grant(const CycleState& cycle, std::span<const OnuDemand> demands);

// --- simulation ----------------------------------------------------------------

struct FrameRecord {
  std::int64_t id = 0;
  int ru_id = 0;
  int wavelength = 0;
  double arrival_us = 0.0;
  double delivered_us = 0.0;
  double propagation_us = 0.0;
  double serialization_us = 0.0;

  double latency_us() const { return delivered_us - arrival_us; }
};

struct SimResult {
  LatencyEstimate estimate;
  std::int64_t frames_generated = 0;
  std::int64_t frames_delivered = 0;
  std::int64_t frames_in_flight = 0;
  std::int64_t measured_delivered = 0;
  // min over measured frames of latency - (propagation + serialization)
  double min_slack_us = 0.0;
  std::vector<double> wavelength_utilization;
  std::vector<FrameRecord> trace;  // measured frames, when record_trace is set
};

/// Guard-discounted utilization of each slice wavelength under the static
/// member mapping: offered / (rate * (T - n_members * guard) / T).
std::vector<double> wavelength_utilization(const VPonSlice& slice, const SimConfig& config);

/// Throws UnstableError when some wavelength has utilization >= 1.
void check_stable(const VPonSlice& slice, const SimConfig& config);

/// Event-driven upstream simulation of one slice. Each ONU emits Poisson
/// frames at rate_bps / packet_bits. Grant cycles start every
/// grant_cycle_us on every wavelength; frames queued at a cycle start are
/// granted in that cycle (fragmenting across cycles when over capacity).
/// Latency = delivery at the OLT - arrival at the ONU, including
/// propagation. Throws UnstableError before simulating an unstable slice.
SimResult simulate_slice_detailed(const VPonSlice& slice, const SimConfig& config);

LatencyEstimate simulate_slice(const VPonSlice& slice, const SimConfig& config);

}  // namespace meshpon
