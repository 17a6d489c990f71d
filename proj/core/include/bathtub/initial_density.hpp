#pragma once

#include <variant>
#include <vector>

namespace bathtub {

struct ZeroDensity {};

/// kbar(x) = amplitude * exp(-width * (x - center)^2).
struct GaussianBump {
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
};

struct TabulatedDensity {
  std::vector<double> positions;
  std::vector<double> values;
};

/// Initial density of active trips over remaining distance.
class InitialDensity {
 public:
  InitialDensity() : law_(ZeroDensity{}) {}
  explicit InitialDensity(ZeroDensity law);
  explicit InitialDensity(GaussianBump law);
  explicit InitialDensity(TabulatedDensity law);

  static InitialDensity zero() { return InitialDensity(ZeroDensity{}); }
  static InitialDensity gaussian_bump(double amplitude, double width, double center) {
    return InitialDensity(GaussianBump{amplitude, width, center});
  }

  double operator()(double x) const;

  /// d kbar / dx; analytic for the bump, segment slope for tabulated data.
  double derivative(double x) const;

  /// Total initial mass over [0, inf). Closed form for the zero and bump
  /// laws; composite trapezoid at resolution <= 1e-4 * kernel_length for
  /// tabulated data.
  double mass(double kernel_length) const;

  double sup_value() const;
  double slope_bound() const;

  /// True when the density beyond kernel_length stays below tolerance.
  bool supported_within(double kernel_length, double tolerance = 1e-12) const;

  bool is_zero() const;

  const std::variant<ZeroDensity, GaussianBump, TabulatedDensity>& law() const {
    return law_;
  }

 private:
  std::variant<ZeroDensity, GaussianBump, TabulatedDensity> law_;
};

}  // namespace bathtub
