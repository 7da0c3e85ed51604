#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meshpon {

/// Low-layer functional split used by a radio unit.
enum class SplitKind { Split71, Split72 };

std::string_view to_string(SplitKind split);
SplitKind split_from_string(std::string_view text);

struct Point {
  double x_km = 0.0;
  double y_km = 0.0;
};

double euclidean_km(const Point& a, const Point& b);

/// Thrown when a slice's offered load does not fit its wavelengths.
class UnstableError : public std::runtime_error {
 public:
  UnstableError(double rho, int wavelength);

  double rho() const noexcept { return rho_; }
  int wavelength() const noexcept { return wavelength_; }

 private:
  double rho_;
  int wavelength_;
};

/// Thrown for malformed configuration documents or parameter sets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace meshpon
