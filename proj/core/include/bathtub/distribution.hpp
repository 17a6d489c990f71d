#pragma once

#include <variant>
#include <vector>

namespace bathtub {

/// phi(x) = 1/length on [0, length], zero elsewhere. Time independent.
struct UniformDistribution {
  double length = 1.0;
};

/// phi(t, x) = exp(-(x - b(t))^2 / (2 a^2)) / (a sqrt(2 pi)) with the
/// affine center path b(t) = center0 + center_rate * t.
struct GaussianDistribution {
  double width = 1.0;  // a
  double center0 = 0.0;
  double center_rate = 0.0;
};

/// Values on a (times x positions) grid, bilinear in between, constant
/// extrapolation in time, zero outside the spatial grid.
struct TabulatedDistribution {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<std::vector<double>> values;  // one row per time sample
};

/// Distribution of entering trips' initial remaining distances.
/// Immutable after construction; safe to share across threads.
class InflowDistribution {
 public:
  explicit InflowDistribution(UniformDistribution law);
  explicit InflowDistribution(GaussianDistribution law);
  explicit InflowDistribution(TabulatedDistribution law);

  static InflowDistribution uniform(double length) {
    return InflowDistribution(UniformDistribution{length});
  }
  static InflowDistribution gaussian(double width, double center0, double center_rate) {
    return InflowDistribution(GaussianDistribution{width, center0, center_rate});
  }

  double operator()(double t, double x) const;

  // Partial derivatives. Analytic for the Gaussian; piecewise slopes for
  // tabulated data; zero almost everywhere for the uniform law.
  double dx(double t, double x) const;
  double dt(double t, double x) const;
  double dxx(double t, double x) const;
  double dtx(double t, double x) const;

  /// Whether the law is twice continuously differentiable on the domain
  /// the solvers probe (true for the Gaussian only).
  bool twice_differentiable() const;

  /// Whether phi(t, .) is the same for all t.
  bool time_independent() const;

  /// phi(t, 0): weight of trips entering with (near) zero remaining distance.
  double at_exit(double t) const { return (*this)(t, 0.0); }

  /// min over [0, horizon] of phi(t, 0).
  double min_at_exit(double horizon) const;

  /// Global sup of phi.
  double sup_value() const;

  /// Integral of phi(t, .) over [0, inf), by composite trapezoid on a
  /// 10^4-point grid spanning the support (exact value is 1 for valid laws).
  double mass(double t) const;

  /// Mass lying outside [0, kernel_length]; analytic for the Gaussian.
  double mass_outside(double t, double kernel_length) const;

  /// Upper end of the spatial support (finite for all built-in laws;
  /// Gaussian treated as supported within a few widths of the center path).
  double support_end(double horizon) const;

  const std::variant<UniformDistribution, GaussianDistribution, TabulatedDistribution>&
  law() const {
    return law_;
  }

 private:
  std::variant<UniformDistribution, GaussianDistribution, TabulatedDistribution> law_;
};

}  // namespace bathtub
