#include "meshpon/ilp.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace meshpon {

void IlpModel::validate() const {
  if (n_rus < 0 || n_mec < 0) throw std::invalid_argument("negative model dimensions");
  if (static_cast<int>(reachable.size()) != n_rus) {
    throw std::invalid_argument("reachable must have one entry per RU");
  }
  if (static_cast<int>(capacity.size()) != n_mec || static_cast<int>(tree.size()) != n_mec) {
    throw std::invalid_argument("capacity and tree must have one entry per MEC");
  }
  for (const auto& sites : reachable) {
    for (int s : sites) {
      if (s < 0 || s >= n_sites()) throw std::invalid_argument("reachable site out of range");
    }
    if (!std::is_sorted(sites.begin(), sites.end())) {
      throw std::invalid_argument("reachable sites must be ascending");
    }
  }
  for (const auto& cut : cuts) {
    if (cut.site < 0 || cut.site >= n_sites() || cut.rus.empty()) {
      throw std::invalid_argument("malformed no-good cut");
    }
    for (int r : cut.rus) {
      if (r < 0 || r >= n_rus) throw std::invalid_argument("cut references unknown RU");
    }
  }
  if (!site_order.empty()) {
    if (static_cast<int>(site_order.size()) != n_rus) {
      throw std::invalid_argument("site_order must have one entry per RU");
    }
    for (int r = 0; r < n_rus; ++r) {
      auto sorted = site_order[r];
      std::sort(sorted.begin(), sorted.end());
      if (sorted != reachable[r]) {
        throw std::invalid_argument("site_order must permute the reachable sites");
      }
    }
  }
  if (n_sites() > 64) throw std::invalid_argument("at most 64 OLT sites are supported");
  if (slice_wavelengths < 1 || wavelengths_per_tree < 0) {
    throw std::invalid_argument("wavelength limits must be positive");
  }
}

namespace {

constexpr int kUnbounded = 1 << 29;

using SiteMask = std::uint64_t;

// Depth-first assignment for one enable set, with forward checking on the
// cuts: once all but one member of a cut sit on its site, that site is
// struck from the last member's domain.
class AssignmentSearch {
 public:
  AssignmentSearch(const IlpModel& model, const std::vector<bool>& enabled)
      : m_(model) {
    const int n_sites = m_.n_sites();
    residual_.assign(n_sites, 0);
    for (int s = 0; s < m_.n_mec; ++s) residual_[s] = enabled[s] ? m_.capacity[s] : 0;
    if (m_.has_co) residual_[m_.co_site()] = kUnbounded;

    domain_.assign(m_.n_rus, 0);
    for (int r = 0; r < m_.n_rus; ++r) {
      for (int s : m_.reachable[r]) {
        if (residual_[s] > 0) domain_[r] |= SiteMask{1} << s;
      }
    }
    cut_count_.assign(m_.cuts.size(), 0);
    cuts_at_.assign(static_cast<std::size_t>(m_.n_rus) * n_sites, {});
    for (std::size_t c = 0; c < m_.cuts.size(); ++c) {
      for (int r : m_.cuts[c].rus) cuts_at_[index(r, m_.cuts[c].site)].push_back(static_cast<int>(c));
    }
    assignment_.assign(m_.n_rus, -1);
  }

  bool run(std::int64_t& nodes) {
    // singleton cuts forbid a site outright
    for (const auto& cut : m_.cuts) {
      if (cut.rus.size() == 1) domain_[cut.rus[0]] &= ~(SiteMask{1} << cut.site);
    }
    if (!relaxation_feasible()) return false;
    return dfs(0, nodes);
  }

  void set_budget(std::int64_t budget) { budget_ = budget; }
  bool exhausted() const { return exhausted_; }

  const std::vector<int>& assignment() const { return assignment_; }

 private:
  std::size_t index(int r, int s) const {
    return static_cast<std::size_t>(r) * m_.n_sites() + s;
  }

  bool dfs(int depth, std::int64_t& nodes) {
    if (depth == m_.n_rus) return true;
    if (budget_ > 0 && nodes >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++nodes;
    const int r = pick_unassigned();
    const auto& order = m_.site_order.empty() ? m_.reachable[r] : m_.site_order[r];
    for (int s : order) {
      if (!(domain_[r] >> s & 1U) || residual_[s] == 0) continue;
      const std::size_t mark = trail_.size();
      if (place(r, s) && relaxation_feasible() && dfs(depth + 1, nodes)) return true;
      unplace(r, s, mark);
      if (exhausted_) return false;
    }
    return false;
  }

  // smallest live domain first, lowest index on ties
  int pick_unassigned() const {
    int best = -1;
    int best_size = 0;
    for (int r = 0; r < m_.n_rus; ++r) {
      if (assignment_[r] >= 0) continue;
      int size = 0;
      for (int s = 0; s < m_.n_sites(); ++s) {
        size += (domain_[r] >> s & 1U) && residual_[s] > 0;
      }
      if (best < 0 || size < best_size) {
        best = r;
        best_size = size;
      }
    }
    return best;
  }

  // false when placing r at s completes a cut or empties another domain;
  // the caller always undoes via unplace
  bool place(int r, int s) {
    assignment_[r] = s;
    --residual_[s];
    bool ok = true;
    for (int c : cuts_at_[index(r, s)]) {
      const auto& rus = m_.cuts[c].rus;
      const int count = ++cut_count_[c];
      const int size = static_cast<int>(rus.size());
      if (count == size) ok = false;
      if (!ok || count != size - 1) continue;
      for (int u : rus) {
        if (assignment_[u] == s) continue;
        if (assignment_[u] < 0 && (domain_[u] >> s & 1U)) {
          domain_[u] &= ~(SiteMask{1} << s);
          trail_.push_back({u, s});
          if (domain_[u] == 0) ok = false;
        }
        break;
      }
    }
    return ok;
  }

  void unplace(int r, int s, std::size_t mark) {
    for (int c : cuts_at_[index(r, s)]) --cut_count_[c];
    ++residual_[s];
    assignment_[r] = -1;
    while (trail_.size() > mark) {
      const auto [u, site] = trail_.back();
      trail_.pop_back();
      domain_[u] |= SiteMask{1} << site;
    }
  }

  // Can the unassigned RUs still be matched within their domains and the
  // residual capacities?
  bool relaxation_feasible() {
    const int n_sites = m_.n_sites();
    load_.assign(n_sites, 0);
    holders_.assign(n_sites, {});
    for (int r = 0; r < m_.n_rus; ++r) {
      if (assignment_[r] >= 0) continue;
      bool done = false;
      for (int s = 0; s < n_sites && !done; ++s) {
        if ((domain_[r] >> s & 1U) && load_[s] < residual_[s]) {
          ++load_[s];
          holders_[s].push_back(r);
          done = true;
        }
      }
      if (done) continue;
      seen_.assign(n_sites, 0);
      if (!augment(r, -1)) return false;
    }
    return true;
  }

  // place r on some site other than `from`, displacing holders if needed
  bool augment(int r, int from) {
    for (int s = 0; s < m_.n_sites(); ++s) {
      if (s == from || seen_[s] || !(domain_[r] >> s & 1U)) continue;
      seen_[s] = 1;
      if (load_[s] < residual_[s]) {
        ++load_[s];
        holders_[s].push_back(r);
        return true;
      }
      for (std::size_t k = 0; k < holders_[s].size(); ++k) {
        if (augment(holders_[s][k], s)) {
          holders_[s][k] = r;
          return true;
        }
      }
    }
    return false;
  }

  const IlpModel& m_;
  std::vector<int> residual_;
  std::vector<SiteMask> domain_;
  std::vector<int> cut_count_;
  std::vector<std::vector<int>> cuts_at_;
  std::vector<int> assignment_;
  std::vector<std::pair<int, int>> trail_;
  std::int64_t budget_ = 0;
  bool exhausted_ = false;
  // relaxation scratch
  std::vector<int> load_;
  std::vector<std::vector<int>> holders_;
  std::vector<char> seen_;
};

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

IlpResult solve_ilp(const IlpModel& model) {
  model.validate();
  IlpResult result;
  const int k_start = std::max(0, model.min_enabled);
  for (int k = k_start; k <= model.n_mec; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    do {
      std::vector<bool> enabled(model.n_mec, false);
      for (int i : idx) enabled[i] = true;

      std::vector<int> per_tree;
      bool spectrum_ok = true;
      for (int m = 0; m < model.n_mec && spectrum_ok; ++m) {
        if (!enabled[m]) continue;
        const int t = model.tree[m];
        if (t >= static_cast<int>(per_tree.size())) per_tree.resize(t + 1, 0);
        per_tree[t] += model.slice_wavelengths;
        spectrum_ok = per_tree[t] <= model.wavelengths_per_tree;
      }
      if (!spectrum_ok) continue;

      AssignmentSearch search(model, enabled);
      search.set_budget(model.node_limit);
      const bool found = search.run(result.nodes);
      if (search.exhausted()) {
        result.complete = false;
        return result;
      }
      if (found) {
        result.feasible = true;
        result.objective = k;
        result.enabled = enabled;
        result.assignment = search.assignment();
        return result;
      }
    } while (k > 0 && next_combination(idx, model.n_mec));
  }
  return result;
}

}  // namespace meshpon
