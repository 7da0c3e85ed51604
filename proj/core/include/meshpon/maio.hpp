#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "meshpon/despon.hpp"
#include "meshpon/ilp.hpp"
#include "meshpon/latmodel.hpp"
#include "meshpon/topology.hpp"
#include "meshpon/traffic.hpp"

namespace meshpon {

/// Pluggable slice latency evaluation used as the nonlinear constraint.
class LatencyOracle {
 public:
  virtual ~LatencyOracle() = default;
  /// Throws UnstableError for slices whose load does not fit.
  virtual LatencyEstimate evaluate(const VPonSlice& slice) const = 0;
  virtual std::string_view name() const = 0;
};

class AnalyticalOracle final : public LatencyOracle {
 public:
  explicit AnalyticalOracle(AnalyticalParams params) : params_(params) {}
  LatencyEstimate evaluate(const VPonSlice& slice) const override;
  std::string_view name() const override { return "analytical"; }

 private:
  AnalyticalParams params_;
};

class SimulatedOracle final : public LatencyOracle {
 public:
  explicit SimulatedOracle(SimConfig config) : config_(config) {}
  LatencyEstimate evaluate(const VPonSlice& slice) const override;
  std::string_view name() const override { return "simulated"; }

 private:
  SimConfig config_;
};

enum class OracleKind { Analytical, Simulated };
std::string_view to_string(OracleKind kind);
OracleKind oracle_kind_from_string(std::string_view text);

/// How a violating slice is turned into a no-good cut.
///  Exact:   the slice's member set itself.
///  Minimal: members are dropped (highest RU index first) while the
///           remainder still violates; by latency monotonicity the shrunken
///           set is a valid no-good that also excludes every superset.
/// In both modes a cut is copied to every other site where each member is
/// at least as far away (latency is monotone in per-member propagation).
enum class CutMode { Exact, Minimal };
std::string_view to_string(CutMode mode);
CutMode cut_mode_from_string(std::string_view text);

struct MaioProblem {
  NetworkLayout layout;
  TrafficProfile traffic;
  double threshold_us = 100.0;
  int wavelengths_per_tree = 4;
  int slice_wavelengths = 1;
  int max_iterations = 100;  // per MEC-count bound
  std::int64_t ilp_node_limit = 200000;  // per ILP solve; 0 = unlimited
  OracleKind oracle = OracleKind::Analytical;
  CutMode cut_mode = CutMode::Minimal;
  bool allow_co = true;
  SimConfig sim;
  LatencyModel model = LatencyModel::GatedCycle;

  void validate() const;
};

enum class MaioStatus { Optimal, FeasibleAtBound, Infeasible };
std::string_view to_string(MaioStatus status);

enum class InfeasibleReason { None, Reachability, Latency, SearchLimit, IterationLimit };
std::string_view to_string(InfeasibleReason reason);

struct SliceResult {
  VPonSlice slice;
  LatencyEstimate latency;
  bool unstable = false;
};

struct IterationRecord {
  int iteration = 0;       // 1-based, over the whole run
  int bound = 0;           // minimum MEC count enforced in this iteration
  int mec_count = 0;       // ILP objective, 0 if the ILP was infeasible
  int violations = 0;
  int cuts_total = 0;
  bool feasible = false;   // no slice violated the threshold
  double elapsed_s = 0.0;
};

/// A no-good cut in layout terms: these RUs may not all share this site.
struct CutRecord {
  OltSite site;
  std::vector<int> ru_ids;  // ascending
};

struct MaioSolution {
  MaioStatus status = MaioStatus::Infeasible;
  InfeasibleReason reason = InfeasibleReason::None;
  std::vector<int> enabled_mecs;        // macro ids, ascending
  std::map<int, OltSite> assignment;    // RU id -> OLT site
  std::vector<SliceResult> slices;      // one per enabled MEC (+ CO if used)
  int n_mec_lower_bound = 0;
  int iterations_used = 0;
  int cuts_added = 0;
  double wall_time_s = 0.0;
  std::vector<IterationRecord> log;
  std::vector<CutRecord> cuts;          // every cut added, lifted ones included
};

/// Builds the latency-free ILP for a problem: reachability keeps only OLT
/// sites whose propagation delay alone is within the threshold.
IlpModel build_ilp(const MaioProblem& problem);

/// Candidate MEC macro ids in ILP site order.
std::vector<int> candidate_mecs(const MaioProblem& problem);

/// Iterative optimization: the latency-free ILP gives N_MEC^lb; each
/// iteration solves the ILP with the accumulated cuts, evaluates every
/// enabled site's slice with the oracle, and cuts violating slices. After
/// max_iterations at one MEC-count bound, or when the ILP hits its node
/// limit there, the bound is raised past the last objective. Running out at
/// the top bound ends the run as Infeasible with reason IterationLimit.
MaioSolution maio_optimize(const MaioProblem& problem, const LatencyOracle& oracle);

/// Convenience overload building the oracle named in the problem.
MaioSolution maio_optimize(const MaioProblem& problem);

std::unique_ptr<LatencyOracle> make_oracle(const MaioProblem& problem);

struct SliceValidation {
  OltSite olt;
  LatencyEstimate simulated;
  bool unstable = false;
  bool violates = false;
};

/// Re-evaluates every slice of a solution with the simulator and flags the
/// ones whose simulated mean exceeds threshold_us (report only).
std::vector<SliceValidation> evaluate_solution(const MaioSolution& solution,
                                               const SimulatedOracle& oracle,
                                               double threshold_us);

}  // namespace meshpon
