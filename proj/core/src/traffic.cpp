#include "meshpon/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "meshpon/topology.hpp"

namespace meshpon {

SplitRateModel SplitRateModel::split71() {
  return {SplitKind::Split71, 1.378e9, 7.384e9, RateInterpolation::Linear};
}

SplitRateModel SplitRateModel::split72() {
  return {SplitKind::Split72, 273.98e6, 2.92e9, RateInterpolation::Linear};
}

SplitRateModel SplitRateModel::for_split(SplitKind split) {
  return split == SplitKind::Split71 ? split71() : split72();
}

double fronthaul_rate_bps(const SplitRateModel& model, double load) {
  if (!(load >= 0.0 && load <= 1.0)) {
    throw std::invalid_argument("load must lie in [0, 1], got " + std::to_string(load));
  }
  switch (model.interpolation) {
    case RateInterpolation::Linear:
      break;
  }
  if (load == 1.0) return model.rate_max_bps;
  return model.rate_min_bps + load * (model.rate_max_bps - model.rate_min_bps);
}

TrafficProfile TrafficProfile::uniform(const NetworkLayout& layout, double load) {
  TrafficProfile profile;
  profile.per_ru.reserve(layout.small_cells.size());
  for (const auto& c : layout.small_cells) {
    RuTraffic t;
    t.ru_id = c.id;
    t.split = c.split;
    t.load = load;
    profile.per_ru.push_back(t);
  }
  return profile;
}

const RuTraffic& TrafficProfile::ru(int ru_id) const {
  auto it = std::find_if(per_ru.begin(), per_ru.end(),
                         [ru_id](const RuTraffic& t) { return t.ru_id == ru_id; });
  if (it == per_ru.end()) {
    throw std::out_of_range("no traffic entry for RU " + std::to_string(ru_id));
  }
  return *it;
}

double TrafficProfile::rate_bps(int ru_id) const {
  const auto& t = ru(ru_id);
  return fronthaul_rate_bps(SplitRateModel::for_split(t.split), t.load);
}

std::vector<LoadSample> evolve_load(const RuTraffic& ru, int max_connections,
                                    std::uint64_t seed, double horizon_s) {
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (max_connections < 1) throw std::invalid_argument("max_connections must be >= 1");
  if (ru.arrival_rate < 0.0) throw std::invalid_argument("arrival_rate must be >= 0");

  const double initial = std::clamp(ru.load, 0.0, 1.0);
  if (ru.arrival_rate == 0.0) {
    return {{0.0, initial}, {horizon_s, initial}};
  }
  if (!(ru.mean_holding_time_s > 0.0)) {
    throw std::invalid_argument("mean_holding_time_s must be positive in dynamic mode");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mu = 1.0 / ru.mean_holding_time_s;
  auto normalized = [&](long n) {
    return std::clamp(static_cast<double>(n) / max_connections, 0.0, 1.0);
  };

  long active = std::lround(initial * max_connections);
  std::vector<LoadSample> trace{{0.0, normalized(active)}};
  double t = 0.0;
  for (;;) {
    const double total = ru.arrival_rate + active * mu;
    t += std::exponential_distribution<double>(total)(rng);
    if (t >= horizon_s) break;
    if (unit(rng) * total < ru.arrival_rate) {
      ++active;
    } else {
      --active;
    }
    trace.push_back({t, normalized(active)});
  }
  trace.push_back({horizon_s, trace.back().load});
  return trace;
}

double time_average_load(const std::vector<LoadSample>& trace) {
  if (trace.size() < 2) return trace.empty() ? 0.0 : trace.front().load;
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    area += trace[i].load * (trace[i + 1].time_s - trace[i].time_s);
  }
  const double span = trace.back().time_s - trace.front().time_s;
  return span > 0.0 ? area / span : trace.front().load;
}

}  // namespace meshpon
