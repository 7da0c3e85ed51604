#pragma once

#include <algorithm>
#include <vector>

#include "meshpon/despon.hpp"
#include "meshpon/latmodel.hpp"

namespace meshpon::testkit {

// one point of the analytical/DES agreement grid
struct GridPoint {
  int members = 0;
  double load = 0.0;
  int n71 = 0;
  int n72 = 0;
  const char* mix = "";
};

inline std::vector<GridPoint> agreement_grid() {
  std::vector<GridPoint> out;
  for (int n : {2, 4, 8, 16, 32}) {
    for (double load : {0.3, 0.5, 0.7, 0.9}) {
      out.push_back({n, load, n, 0, "7.1"});
      out.push_back({n, load, 0, n, "7.2"});
      out.push_back({n, load, n / 2, n - n / 2, "mixed"});
    }
  }
  return out;
}

// fewest wavelengths keeping every wavelength at or below max_rho
inline VPonSlice grid_slice(const GridPoint& p, const SimConfig& config, double max_rho = 0.95) {
  for (int w = 1;; ++w) {
    auto slice = composed_slice(p.n71, p.n72, p.load, 1.0, w);
    const auto rho = wavelength_utilization(slice, config);
    if (*std::max_element(rho.begin(), rho.end()) <= max_rho) return slice;
  }
}

}  // namespace meshpon::testkit
