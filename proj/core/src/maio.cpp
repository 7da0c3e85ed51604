#include "meshpon/maio.hpp"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <stdexcept>
#include <string>

namespace meshpon {

LatencyEstimate AnalyticalOracle::evaluate(const VPonSlice& slice) const {
  return analytic_latency(slice, params_);
}

LatencyEstimate SimulatedOracle::evaluate(const VPonSlice& slice) const {
  return simulate_slice(slice, config_);
}

std::string_view to_string(OracleKind kind) {
  return kind == OracleKind::Simulated ? "simulated" : "analytical";
}

OracleKind oracle_kind_from_string(std::string_view text) {
  if (text == "analytical") return OracleKind::Analytical;
  if (text == "simulated") return OracleKind::Simulated;
  throw ConfigError("unknown oracle '" + std::string(text) + "'");
}

std::string_view to_string(CutMode mode) { return mode == CutMode::Exact ? "exact" : "minimal"; }

CutMode cut_mode_from_string(std::string_view text) {
  if (text == "exact") return CutMode::Exact;
  if (text == "minimal") return CutMode::Minimal;
  throw ConfigError("unknown cut mode '" + std::string(text) + "'");
}

std::string_view to_string(MaioStatus status) {
  switch (status) {
    case MaioStatus::Optimal: return "optimal";
    case MaioStatus::FeasibleAtBound: return "feasible-at-bound";
    case MaioStatus::Infeasible: return "infeasible";
  }
  return "infeasible";
}

std::string_view to_string(InfeasibleReason reason) {
  switch (reason) {
    case InfeasibleReason::None: return "none";
    case InfeasibleReason::Reachability: return "reachability";
    case InfeasibleReason::Latency: return "latency";
    case InfeasibleReason::SearchLimit: return "search-limit";
    case InfeasibleReason::IterationLimit: return "iteration-limit";
  }
  return "none";
}

void MaioProblem::validate() const {
  if (!(threshold_us > 0.0)) throw ConfigError("threshold_us must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (ilp_node_limit < 0) throw ConfigError("ilp_node_limit must be >= 0");
  if (slice_wavelengths < 1) throw ConfigError("slice_wavelengths must be >= 1");
  if (wavelengths_per_tree < slice_wavelengths) {
    throw ConfigError("wavelengths_per_tree must fit at least one slice");
  }
  validate_layout(layout);
  for (const auto& c : layout.small_cells) traffic.ru(c.id);
  sim.validate();
}

std::unique_ptr<LatencyOracle> make_oracle(const MaioProblem& problem) {
  if (problem.oracle == OracleKind::Simulated) {
    return std::make_unique<SimulatedOracle>(problem.sim);
  }
  return std::make_unique<AnalyticalOracle>(AnalyticalParams::from(problem.sim, problem.model));
}

std::vector<int> candidate_mecs(const MaioProblem& problem) {
  std::vector<int> ids;
  for (const auto& m : problem.layout.macro_sites) ids.push_back(m.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

// one-way fiber length per RU index and ILP site; -1 where no path exists
std::vector<std::vector<double>> site_distances(const MaioProblem& problem,
                                                const std::vector<int>& mecs) {
  const auto& layout = problem.layout;
  std::vector<std::vector<double>> dist;
  for (const auto& ru : layout.small_cells) {
    std::vector<double> row;
    for (int id : mecs) row.push_back(east_west_distance_km(layout, ru, layout.macro(id)).value_or(-1.0));
    if (problem.allow_co) row.push_back(co_distance_km(layout, ru));
    dist.push_back(std::move(row));
  }
  return dist;
}

}  // namespace

IlpModel build_ilp(const MaioProblem& problem) {
  const auto& layout = problem.layout;
  const auto mecs = candidate_mecs(problem);
  IlpModel model;
  model.n_rus = static_cast<int>(layout.small_cells.size());
  model.n_mec = static_cast<int>(mecs.size());
  model.has_co = problem.allow_co;
  model.wavelengths_per_tree = problem.wavelengths_per_tree;
  model.node_limit = problem.ilp_node_limit;
  model.slice_wavelengths = problem.slice_wavelengths;

  std::vector<int> tree_ids;
  for (int id : mecs) {
    const auto& m = layout.macro(id);
    model.capacity.push_back(m.mec_capacity);
    auto it = std::find(tree_ids.begin(), tree_ids.end(), m.level2_id);
    if (it == tree_ids.end()) {
      tree_ids.push_back(m.level2_id);
      it = tree_ids.end() - 1;
    }
    model.tree.push_back(static_cast<int>(it - tree_ids.begin()));
  }

  const auto dist = site_distances(problem, mecs);
  const double us_per_km = problem.sim.propagation_us_per_km;
  for (int r = 0; r < model.n_rus; ++r) {
    std::vector<int> sites;
    for (int s = 0; s < model.n_sites(); ++s) {
      const double d = dist[r][s];
      if (d >= 0.0 && d * us_per_km <= problem.threshold_us) sites.push_back(s);
    }
    // nearest first: the returned assignment leans toward short slices
    std::vector<int> order = sites;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[r][a] < dist[r][b]; });
    model.reachable.push_back(std::move(sites));
    model.site_order.push_back(std::move(order));
  }
  return model;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Evaluation {
  LatencyEstimate latency;
  bool unstable = false;
  bool violates = false;
};

class SliceEvaluator {
 public:
  SliceEvaluator(const MaioProblem& problem, const LatencyOracle& oracle,
                 const std::vector<int>& mecs)
      : problem_(problem), oracle_(oracle), mecs_(mecs) {}

  OltSite site(int s) const {
    return s < static_cast<int>(mecs_.size()) ? OltSite{mecs_[s]} : OltSite{};
  }

  VPonSlice slice_for(int s, const std::vector<int>& ru_indices) const {
    std::vector<int> ids;
    ids.reserve(ru_indices.size());
    for (int r : ru_indices) ids.push_back(problem_.layout.small_cells[r].id);
    return make_slice(problem_.layout, problem_.traffic, site(s), ids,
                      problem_.slice_wavelengths);
  }

  Evaluation evaluate(int s, const std::vector<int>& ru_indices) const {
    Evaluation e;
    try {
      e.latency = oracle_.evaluate(slice_for(s, ru_indices));
      e.violates = e.latency.mean_us > problem_.threshold_us;
    } catch (const UnstableError& err) {
      e.unstable = true;
      e.violates = true;
      e.latency.max_utilization = err.rho();
    }
    return e;
  }

  // drops members in `order` while the rest still violates; sorted result
  std::vector<int> shrink(int s, std::vector<int> members, const std::vector<int>& order) const {
    for (int r : order) {
      if (members.size() <= 1) break;
      std::vector<int> trial;
      for (int u : members) {
        if (u != r) trial.push_back(u);
      }
      if (evaluate(s, trial).violates) members = std::move(trial);
    }
    return members;
  }

 private:
  const MaioProblem& problem_;
  const LatencyOracle& oracle_;
  const std::vector<int>& mecs_;
};

// Latency only grows with each member's propagation, so a set that violates
// at one site also violates at any site where no member is closer.
std::vector<NoGoodCut> lift(const NoGoodCut& cut, const IlpModel& model,
                            const std::vector<std::vector<double>>& dist) {
  std::vector<NoGoodCut> out;
  for (int s = 0; s < model.n_sites(); ++s) {
    if (s == cut.site) continue;
    bool dominated = true;
    for (int r : cut.rus) {
      const auto& reach = model.reachable[r];
      dominated = dominated && std::binary_search(reach.begin(), reach.end(), s) &&
                  dist[r][s] >= dist[r][cut.site];
    }
    if (dominated) out.push_back({s, cut.rus});
  }
  return out;
}

}  // namespace

MaioSolution maio_optimize(const MaioProblem& problem, const LatencyOracle& oracle) {
  problem.validate();
  const auto start = Clock::now();
  const auto mecs = candidate_mecs(problem);
  IlpModel model = build_ilp(problem);
  SliceEvaluator evaluator(problem, oracle, mecs);

  const auto dist = site_distances(problem, mecs);
  MaioSolution solution;
  const auto finish = [&](InfeasibleReason reason) {
    solution.reason = reason;
    for (const auto& c : model.cuts) {
      CutRecord rec{evaluator.site(c.site), {}};
      for (int r : c.rus) rec.ru_ids.push_back(problem.layout.small_cells[r].id);
      std::sort(rec.ru_ids.begin(), rec.ru_ids.end());
      solution.cuts.push_back(std::move(rec));
    }
    solution.wall_time_s = seconds_since(start);
    return solution;
  };
  const IlpResult relaxed = solve_ilp(model);
  if (!relaxed.feasible) {
    return finish(relaxed.complete ? InfeasibleReason::Reachability
                                   : InfeasibleReason::SearchLimit);
  }
  solution.n_mec_lower_bound = relaxed.objective;

  int bound = relaxed.objective;
  bool bound_raised = false;
  while (bound <= model.n_mec) {
    model.min_enabled = bound;
    int last_objective = bound;
    const bool last_bound = bound == model.n_mec;
    for (int it = 0; it < problem.max_iterations; ++it) {
      const IlpResult res = solve_ilp(model);
      if (!res.feasible) {
        // cuts only accumulate and the search covers every count >= bound
        if (res.complete) return finish(InfeasibleReason::Latency);
        if (last_bound) return finish(InfeasibleReason::SearchLimit);
        break;
      }
      last_objective = res.objective;
      ++solution.iterations_used;

      std::vector<std::vector<int>> members(model.n_sites());
      for (int r = 0; r < model.n_rus; ++r) members[res.assignment[r]].push_back(r);

      std::vector<SliceResult> slices;
      std::vector<NoGoodCut> new_cuts;
      int violations = 0;
      for (int s = 0; s < model.n_sites(); ++s) {
        const bool is_mec = s < model.n_mec;
        if (is_mec && !res.enabled[s]) continue;
        if (!is_mec && members[s].empty()) continue;
        SliceResult sr;
        if (members[s].empty()) {
          sr.slice.olt = evaluator.site(s);
          slices.push_back(sr);
          continue;
        }
        const Evaluation e = evaluator.evaluate(s, members[s]);
        sr.slice = evaluator.slice_for(s, members[s]);
        sr.latency = e.latency;
        sr.unstable = e.unstable;
        slices.push_back(sr);
        violations += e.violates;
        if (e.violates && problem.cut_mode == CutMode::Exact) {
          new_cuts.push_back({s, members[s]});
        } else if (e.violates) {
          const std::vector<int> order(members[s].rbegin(), members[s].rend());
          new_cuts.push_back({s, evaluator.shrink(s, members[s], order)});
        }
      }

      IterationRecord rec;
      rec.iteration = solution.iterations_used;
      rec.bound = bound;
      rec.mec_count = res.objective;
      rec.violations = violations;
      rec.feasible = new_cuts.empty();
      for (auto& c : new_cuts) {
        for (auto& lifted : lift(c, model, dist)) model.cuts.push_back(std::move(lifted));
        model.cuts.push_back(std::move(c));
      }
      solution.cuts_added = static_cast<int>(model.cuts.size());
      rec.cuts_total = solution.cuts_added;
      rec.elapsed_s = seconds_since(start);
      solution.log.push_back(rec);

      if (rec.feasible) {
        solution.status = bound_raised ? MaioStatus::FeasibleAtBound : MaioStatus::Optimal;
        for (int s = 0; s < model.n_mec; ++s) {
          if (res.enabled[s]) solution.enabled_mecs.push_back(mecs[s]);
        }
        for (int r = 0; r < model.n_rus; ++r) {
          solution.assignment[problem.layout.small_cells[r].id] =
              evaluator.site(res.assignment[r]);
        }
        solution.slices = std::move(slices);
        return finish(InfeasibleReason::None);
      }
    }
    if (last_bound) break;
    bound = std::max(bound, last_objective) + 1;
    bound_raised = true;
  }
  return finish(InfeasibleReason::IterationLimit);
}

MaioSolution maio_optimize(const MaioProblem& problem) {
  const auto oracle = make_oracle(problem);
  return maio_optimize(problem, *oracle);
}

std::vector<SliceValidation> evaluate_solution(const MaioSolution& solution,
                                               const SimulatedOracle& oracle,
                                               double threshold_us) {
  std::vector<SliceValidation> report;
  for (const auto& sr : solution.slices) {
    if (sr.slice.members.empty()) continue;
    SliceValidation v;
    v.olt = sr.slice.olt;
    try {
      v.simulated = oracle.evaluate(sr.slice);
      v.violates = v.simulated.mean_us > threshold_us;
    } catch (const UnstableError& err) {
      v.unstable = true;
      v.violates = true;
      v.simulated.max_utilization = err.rho();
    }
    report.push_back(v);
  }
  return report;
}

}  // namespace meshpon
