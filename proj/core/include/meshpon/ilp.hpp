#pragma once

#include <cstdint>
#include <vector>

namespace meshpon {

/// No-good cut: not every RU in `rus` may be assigned to `site` at once,
/// i.e. sum_{r in rus} x[r][site] <= |rus| - 1.
struct NoGoodCut {
  int site = 0;
  std::vector<int> rus;  // sorted RU indices
};

/// 0/1 program over enable variables y[m] (candidate MEC sites) and
/// assignment variables x[r][s] (RU r served by OLT site s):
///
///   minimize    sum_m y[m]
///   subject to  sum_s x[r][s] = 1                        every RU
///               x[r][m] <= y[m]                           linking
///               x[r][s] = 0 unless s in reachable[r]      reachability
///               sum_r x[r][m] <= capacity[m]              MEC capacity
///               sum_{m in tree t} y[m] * slice_wavelengths
///                   <= wavelengths_per_tree               per level-2 tree
///               no-good cuts
///               sum_m y[m] >= min_enabled
///
/// Sites 0..n_mec-1 are MECs. When has_co is set, site n_mec is the
/// central office: always available, free, and uncapacitated.
struct IlpModel {
  int n_rus = 0;
  int n_mec = 0;
  bool has_co = false;
  std::vector<std::vector<int>> reachable;  // per RU, ascending site indices
  // optional per-RU order in which the search tries sites (a permutation of
  // reachable[r]); empty = ascending. Changes which optimal assignment is
  // returned, never the objective.
  std::vector<std::vector<int>> site_order;
  std::vector<int> capacity;                // per MEC
  std::vector<int> tree;                    // per MEC, level-2 tree index
  int wavelengths_per_tree = 4;
  int slice_wavelengths = 1;
  int min_enabled = 0;
  std::vector<NoGoodCut> cuts;
  // search nodes allowed per solve; 0 = unlimited
  std::int64_t node_limit = 0;

  int co_site() const { return has_co ? n_mec : -1; }
  int n_sites() const { return n_mec + (has_co ? 1 : 0); }
  void validate() const;
};

struct IlpResult {
  bool feasible = false;
  // false when node_limit stopped the search before it was conclusive
  bool complete = true;
  int objective = 0;
  std::vector<bool> enabled;    // per MEC
  std::vector<int> assignment;  // per RU, site index
  std::int64_t nodes = 0;       // search nodes expanded
};

/// Exact solve. Enable sets are enumerated by increasing size and then in
/// lexicographic order; for each, a depth-first search assigns RUs (smallest
/// remaining domain first, lowest index on ties) to sites in site_order.
/// Pruning: forward checking on the cuts, and a bipartite matching
/// relaxation over the remaining domains and capacities. The first
/// feasible enable set found is optimal. If node_limit runs out first the
/// result is infeasible with complete == false.
IlpResult solve_ilp(const IlpModel& model);

}  // namespace meshpon
