#include "meshpon/despon.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace meshpon {

void SimConfig::validate() const {
  if (!(channel_rate_bps > 0) || !(grant_cycle_us > 0) || !(packet_bits > 0) ||
      !(propagation_us_per_km > 0)) {
    throw ConfigError("simulation rates, cycle, packet size and propagation must be positive");
  }
  if (guard_time_us < 0) throw ConfigError("guard_time_us must be >= 0");
  if (measured_frames < 1 || warmup_frames < 0) {
    throw ConfigError("measured_frames must be >= 1 and warmup_frames >= 0");
  }
}

std::int64_t SimConfig::effective_warmup() const {
  // warm-up is 10% of the whole run: w = (w + m) / 10  =>  w = m / 9
  return std::max(warmup_frames, (measured_frames + 8) / 9);
}

std::vector<double> proportional_shares(std::span<const double> demands, double capacity) {
  const double total = std::accumulate(demands.begin(), demands.end(), 0.0);
  std::vector<double> out(demands.begin(), demands.end());
  if (total <= capacity) return out;
  if (capacity <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double scale = capacity / total;
  for (auto& d : out) d *= scale;
  return out;
}

std::vector<Grant> scheduler_grant(const CycleState& cycle, std::span<const OnuDemand> demands) {
  std::vector<OnuDemand> active;
  for (const auto& d : demands) {
    if (d.bits > 0.0) active.push_back(d);
  }
  std::stable_sort(active.begin(), active.end(),
                   [](const OnuDemand& a, const OnuDemand& b) { return a.onu < b.onu; });

  const double rate_per_us = cycle.rate_bps * 1e-6;
  const double airtime = cycle.cycle_us - static_cast<double>(active.size()) * cycle.guard_us;
  const double capacity_bits = std::max(0.0, airtime) * rate_per_us;

  std::vector<double> want;
  want.reserve(active.size());
  for (const auto& d : active) want.push_back(d.bits);
  const auto share = proportional_shares(want, capacity_bits);

  std::vector<Grant> grants;
  grants.reserve(active.size());
  double t = cycle.start_us;
  for (std::size_t i = 0; i < active.size(); ++i) {
    Grant g;
    g.onu = active[i].onu;
    g.bits = share[i];
    g.start_us = t;
    g.end_us = t + share[i] / rate_per_us;
    t = g.end_us + cycle.guard_us;
    grants.push_back(g);
  }
  return grants;
}

std::vector<double> wavelength_utilization(const VPonSlice& slice, const SimConfig& config) {
  const auto mapping = map_members_to_wavelengths(slice);
  const std::size_t n_w = slice.wavelengths.size();
  std::vector<double> offered(n_w, 0.0);
  std::vector<int> count(n_w, 0);
  for (std::size_t i = 0; i < slice.members.size(); ++i) {
    offered[mapping[i]] += slice.members[i].rate_bps;
    ++count[mapping[i]];
  }
  std::vector<double> rho(n_w, 0.0);
  for (std::size_t w = 0; w < n_w; ++w) {
    const double airtime = config.grant_cycle_us - count[w] * config.guard_time_us;
    if (airtime <= 0.0) {
      rho[w] = offered[w] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      continue;
    }
    rho[w] = offered[w] / (config.channel_rate_bps * (airtime / config.grant_cycle_us));
  }
  return rho;
}

void check_stable(const VPonSlice& slice, const SimConfig& config) {
  const auto rho = wavelength_utilization(slice, config);
  for (std::size_t w = 0; w < rho.size(); ++w) {
    if (rho[w] >= 1.0) throw UnstableError(rho[w], slice.wavelengths[w]);
  }
}

namespace {

enum class EventKind { CycleStart, Arrival, Delivery };

struct Event {
  double time_us;
  std::uint64_t seq;
  EventKind kind;
  int index;            // wavelength (CycleStart) or member (Arrival, Delivery)
  std::int64_t frame;   // Delivery only
  double arrival_us;    // Delivery only
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time_us != b.time_us ? a.time_us > b.time_us : a.seq > b.seq;
  }
};

struct Pending {
  std::int64_t id;
  double arrival_us;
  double remaining_bits;
};

class Engine {
 public:
  Engine(const VPonSlice& slice, const SimConfig& config)
      : slice_(slice),
        cfg_(config),
        rng_(config.seed),
        mapping_(map_members_to_wavelengths(slice)),
        queues_(slice.members.size()),
        per_wavelength_(slice.wavelengths.size()) {
    for (std::size_t i = 0; i < slice.members.size(); ++i) {
      per_wavelength_[mapping_[i]].push_back(static_cast<int>(i));
      frame_rate_per_us_.push_back(slice.members[i].rate_bps / cfg_.packet_bits * 1e-6);
    }
    for (auto& onus : per_wavelength_) {
      std::stable_sort(onus.begin(), onus.end(), [&](int a, int b) {
        return slice_.members[a].ru_id < slice_.members[b].ru_id;
      });
    }
    warmup_ = cfg_.effective_warmup();
    total_ = warmup_ + cfg_.measured_frames;
    serialization_us_ = cfg_.packet_bits / (cfg_.channel_rate_bps * 1e-6);
  }

  SimResult run() {
    for (std::size_t w = 0; w < per_wavelength_.size(); ++w) {
      push({0.0, 0, EventKind::CycleStart, static_cast<int>(w), 0, 0.0});
    }
    for (std::size_t i = 0; i < slice_.members.size(); ++i) schedule_arrival(static_cast<int>(i), 0.0);

    double clock = 0.0;
    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      if (ev.time_us < clock) throw std::logic_error("event queue went backwards");
      clock = ev.time_us;
      switch (ev.kind) {
        case EventKind::Arrival: on_arrival(ev); break;
        case EventKind::CycleStart: on_cycle(ev); break;
        case EventKind::Delivery: on_delivery(ev); break;
      }
    }
    return finish();
  }

 private:
  void push(Event ev) {
    ev.seq = seq_++;
    events_.push(ev);
  }

  void schedule_arrival(int member, double now) {
    const double lambda = frame_rate_per_us_[member];
    if (!(lambda > 0.0)) return;
    const double gap = std::exponential_distribution<double>(lambda)(rng_);
    push({now + gap, 0, EventKind::Arrival, member, 0, 0.0});
  }

  void on_arrival(const Event& ev) {
    if (generated_ >= total_) return;  // generation closed; stale arrival
    queues_[ev.index].push_back({generated_, ev.time_us, cfg_.packet_bits});
    ++generated_;
    if (generated_ < total_) schedule_arrival(ev.index, ev.time_us);
  }

  void on_cycle(const Event& ev) {
    const int w = ev.index;
    const auto& onus = per_wavelength_[w];
    std::vector<OnuDemand> demands;
    demands.reserve(onus.size());
    for (int m : onus) {
      double bits = 0.0;
      for (const auto& f : queues_[m]) bits += f.remaining_bits;
      demands.push_back({m, bits});
    }
    const CycleState cycle{ev.time_us, cfg_.grant_cycle_us, cfg_.guard_time_us,
                           cfg_.channel_rate_bps};
    const double rate_per_us = cfg_.channel_rate_bps * 1e-6;
    for (const Grant& g : scheduler_grant(cycle, demands)) {
      auto& q = queues_[g.onu];
      double left = g.bits;
      double t = g.start_us;
      const double prop = slice_.members[g.onu].distance_km * cfg_.propagation_us_per_km;
      while (!q.empty() && left > kBitEps) {
        Pending& f = q.front();
        const double sent = std::min(left, f.remaining_bits);
        t += sent / rate_per_us;
        left -= sent;
        f.remaining_bits -= sent;
        if (f.remaining_bits <= kBitEps) {
          push({t + prop, 0, EventKind::Delivery, g.onu, f.id, f.arrival_us});
          q.pop_front();
        }
      }
    }

    bool backlog = false;
    for (int m : onus) backlog = backlog || !queues_[m].empty();
    if (generated_ < total_ || backlog) {
      push({ev.time_us + cfg_.grant_cycle_us, 0, EventKind::CycleStart, w, 0, 0.0});
    }
  }

  void on_delivery(const Event& ev) {
    ++delivered_;
    if (ev.frame < warmup_ || ev.frame >= total_) return;
    const double prop = slice_.members[ev.index].distance_km * cfg_.propagation_us_per_km;
    const double latency = ev.time_us - ev.arrival_us;
    latencies_.push_back(latency);
    min_slack_ = std::min(min_slack_, latency - (prop + serialization_us_));
    if (cfg_.record_trace) {
      FrameRecord r;
      r.id = ev.frame;
      r.ru_id = slice_.members[ev.index].ru_id;
      r.wavelength = slice_.wavelengths[mapping_[ev.index]];
      r.arrival_us = ev.arrival_us;
      r.delivered_us = ev.time_us;
      r.propagation_us = prop;
      r.serialization_us = serialization_us_;
      trace_.push_back(r);
    }
  }

  SimResult finish() {
    SimResult out;
    out.frames_generated = generated_;
    out.frames_delivered = delivered_;
    std::int64_t queued = 0;
    for (const auto& q : queues_) queued += static_cast<std::int64_t>(q.size());
    out.frames_in_flight = queued;
    out.measured_delivered = static_cast<std::int64_t>(latencies_.size());
    out.min_slack_us = latencies_.empty() ? 0.0 : min_slack_;
    out.wavelength_utilization = wavelength_utilization(slice_, cfg_);

    LatencyEstimate& est = out.estimate;
    est.source = LatencySource::Simulated;
    est.frames_measured = out.measured_delivered;
    est.max_utilization = out.wavelength_utilization.empty()
                              ? 0.0
                              : *std::max_element(out.wavelength_utilization.begin(),
                                                  out.wavelength_utilization.end());
    if (!latencies_.empty()) {
      est.mean_us = std::accumulate(latencies_.begin(), latencies_.end(), 0.0) /
                    static_cast<double>(latencies_.size());
      const auto rank = static_cast<std::size_t>(
          std::ceil(0.99 * static_cast<double>(latencies_.size()))) - 1;
      std::nth_element(latencies_.begin(), latencies_.begin() + rank, latencies_.end());
      est.p99_us = latencies_[rank];
    }
    std::sort(trace_.begin(), trace_.end(),
              [](const FrameRecord& a, const FrameRecord& b) { return a.id < b.id; });
    out.trace = std::move(trace_);
    return out;
  }

  static constexpr double kBitEps = 1e-6;

  const VPonSlice& slice_;
  const SimConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<int> mapping_;
  std::vector<std::deque<Pending>> queues_;
  std::vector<std::vector<int>> per_wavelength_;
  std::vector<double> frame_rate_per_us_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  std::int64_t warmup_ = 0;
  std::int64_t total_ = 0;
  std::int64_t generated_ = 0;
  std::int64_t delivered_ = 0;
  double serialization_us_ = 0.0;
  double min_slack_ = std::numeric_limits<double>::infinity();
  std::vector<double> latencies_;
  std::vector<FrameRecord> trace_;
};

}  // namespace

SimResult simulate_slice_detailed(const VPonSlice& slice, const SimConfig& config) {
  config.validate();
  if (slice.members.empty()) throw std::invalid_argument("slice has no members");
  if (slice.wavelengths.empty()) throw std::invalid_argument("slice has no wavelengths");
  for (const auto& m : slice.members) {
    if (!(m.rate_bps > 0.0)) {
      throw std::invalid_argument("member " + std::to_string(m.ru_id) + " has no offered rate");
    }
    if (m.distance_km < 0.0) throw std::invalid_argument("negative member distance");
  }
  check_stable(slice, config);
  Engine engine(slice, config);
  return engine.run();
}

LatencyEstimate simulate_slice(const VPonSlice& slice, const SimConfig& config) {
  return simulate_slice_detailed(slice, config).estimate;
}

}  // namespace meshpon
