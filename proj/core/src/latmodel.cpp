#include "meshpon/latmodel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "meshpon/traffic.hpp"

namespace meshpon {

std::string_view to_string(LatencyModel model) {
  return model == LatencyModel::GatedCycle ? "gated-cycle" : "mg1-vacation";
}

LatencyModel latency_model_from_string(std::string_view text) {
  if (text == "gated-cycle") return LatencyModel::GatedCycle;
  if (text == "mg1-vacation") return LatencyModel::Mg1Vacation;
  throw ConfigError("unknown latency model '" + std::string(text) + "'");
}

AnalyticalParams AnalyticalParams::from(const SimConfig& config, LatencyModel model) {
  AnalyticalParams p;
  p.channel_rate_bps = config.channel_rate_bps;
  p.grant_cycle_us = config.grant_cycle_us;
  p.guard_time_us = config.guard_time_us;
  p.packet_bits = config.packet_bits;
  p.propagation_us_per_km = config.propagation_us_per_km;
  p.model = model;
  return p;
}

double AnalyticalParams::guard_overhead(int n_bursts) const {
  return n_bursts * guard_time_us / grant_cycle_us;
}

std::vector<LatencyTerms> analytic_terms(const VPonSlice& slice, const AnalyticalParams& params) {
  if (slice.members.empty()) throw std::invalid_argument("slice has no members");
  const auto mapping = map_members_to_wavelengths(slice);
  const std::size_t n_w = slice.wavelengths.size();
  std::vector<double> offered(n_w, 0.0);
  std::vector<int> count(n_w, 0);
  for (std::size_t i = 0; i < slice.members.size(); ++i) {
    offered[mapping[i]] += slice.members[i].rate_bps;
    ++count[mapping[i]];
  }
  const double prop = slice.max_distance_km() * params.propagation_us_per_km;
  const double rate_per_us = params.channel_rate_bps * 1e-6;
  const double s_raw = params.packet_bits / rate_per_us;

  std::vector<LatencyTerms> out(n_w);
  for (std::size_t w = 0; w < n_w; ++w) {
    LatencyTerms& t = out[w];
    t.propagation_us = prop;
    t.grant_wait_us = params.grant_cycle_us / 2.0;
    t.serialization_us = s_raw;
    if (count[w] == 0) continue;

    const double share = (params.grant_cycle_us - count[w] * params.guard_time_us) / params.grant_cycle_us;
    if (share <= 0.0) throw UnstableError(std::numeric_limits<double>::infinity(), slice.wavelengths[w]);
    const double lambda = offered[w] / params.packet_bits * 1e-6;  // frames per us
    const double s_eff = s_raw / share;
    // same expression as the simulator's stability check
    t.utilization = offered[w] / (params.channel_rate_bps * share);
    if (t.utilization >= 1.0) throw UnstableError(t.utilization, slice.wavelengths[w]);
    // deterministic frame size: E[S^2] = S^2
    t.queueing_us = lambda * s_eff * s_eff / (2.0 * (1.0 - t.utilization));
    if (params.model == LatencyModel::GatedCycle) {
      const double rho_raw = lambda * s_raw;
      t.cycle_offset_us =
          rho_raw * params.grant_cycle_us / 2.0 + (count[w] - 1) * params.guard_time_us / 2.0;
    }
  }
  return out;
}

LatencyEstimate analytic_latency(const VPonSlice& slice, const AnalyticalParams& params) {
  const auto terms = analytic_terms(slice, params);
  const auto mapping = map_members_to_wavelengths(slice);
  std::vector<double> offered(terms.size(), 0.0);
  for (std::size_t i = 0; i < slice.members.size(); ++i) {
    offered[mapping[i]] += slice.members[i].rate_bps;
  }
  const double total = slice.offered_bps();
  LatencyEstimate est;
  est.source = LatencySource::Analytical;
  for (std::size_t w = 0; w < terms.size(); ++w) {
    const double weight = total > 0.0 ? offered[w] / total : 1.0 / terms.size();
    est.mean_us += weight * terms[w].total_us();
    est.max_utilization = std::max(est.max_utilization, terms[w].utilization);
  }
  return est;
}

VPonSlice composed_slice(int n71, int n72, double load, double distance_km, int n_wavelengths) {
  if (n71 < 0 || n72 < 0) throw std::invalid_argument("member counts must be >= 0");
  if (n_wavelengths < 1) throw std::invalid_argument("n_wavelengths must be >= 1");
  VPonSlice slice;
  slice.wavelengths.clear();
  for (int w = 0; w < n_wavelengths; ++w) slice.wavelengths.push_back(w);
  const double r71 = fronthaul_rate_bps(SplitRateModel::split71(), load);
  const double r72 = fronthaul_rate_bps(SplitRateModel::split72(), load);
  int id = 0;
  for (int i = 0; i < n71; ++i) slice.members.push_back({id++, SplitKind::Split71, distance_km, r71});
  for (int i = 0; i < n72; ++i) slice.members.push_back({id++, SplitKind::Split72, distance_km, r72});
  return slice;
}

bool max_members_feasible(int n71, int n72, double load, double threshold_us,
                          const AnalyticalParams& params, double distance_km,
                          int n_wavelengths) {
  if (!(threshold_us > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (n71 == 0 && n72 == 0) return true;
  try {
    const auto est =
        analytic_latency(composed_slice(n71, n72, load, distance_km, n_wavelengths), params);
    return est.mean_us <= threshold_us;
  } catch (const UnstableError&) {
    return false;
  }
}

}  // namespace meshpon
