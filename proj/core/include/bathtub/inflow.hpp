#pragma once

#include <variant>
#include <vector>

namespace bathtub {

struct ConstantInflow {
  double rate = 0.0;
};

/// f(t) = base + amplitude * sin(angular_frequency * t).
struct SinusoidalInflow {
  double base = 0.0;
  double amplitude = 0.0;
  double angular_frequency = 0.0;
};

/// Piecewise-linear rate over ascending sample times; constant extrapolation.
struct TabulatedInflow {
  std::vector<double> times;
  std::vector<double> values;
};

/// Rate of trips entering the network. Immutable after construction.
class InflowRate {
 public:
  explicit InflowRate(ConstantInflow law);
  explicit InflowRate(SinusoidalInflow law);
  explicit InflowRate(TabulatedInflow law);

  static InflowRate constant(double rate) { return InflowRate(ConstantInflow{rate}); }
  static InflowRate sinusoidal(double base, double amplitude, double angular_frequency) {
    return InflowRate(SinusoidalInflow{base, amplitude, angular_frequency});
  }

  double operator()(double t) const;

  /// Exact integral for the closed-form laws; 100-point composite trapezoid
  /// for tabulated data.
  double integral(double t0, double t1) const;

  double interval_mean(double t0, double t1) const {
    return integral(t0, t1) / (t1 - t0);
  }

  /// Upper bound of f on [0, horizon].
  double sup_on(double horizon) const;

  /// Lower bound of f on [0, horizon].
  double inf_on(double horizon) const;

  /// Bound on |f'| (slope of the law).
  double slope_bound() const;

  const std::variant<ConstantInflow, SinusoidalInflow, TabulatedInflow>& law() const {
    return law_;
  }

 private:
  std::variant<ConstantInflow, SinusoidalInflow, TabulatedInflow> law_;
};

}  // namespace bathtub
