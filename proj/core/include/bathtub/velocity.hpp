#pragma once

#include <variant>
#include <vector>

namespace bathtub {

/// V(k) = v0 * (1 - k / k_jam), clamped at zero beyond the jam density.
struct Greenshields {
  double free_flow_speed = 1.0;
  double jam_density = 1.0;
};

struct ConstantSpeed {
  double value = 1.0;
};

/// Piecewise-linear speed law over ascending density breakpoints; constant
/// extrapolation outside the tabulated range.
struct TabulatedSpeed {
  std::vector<double> densities;
  std::vector<double> speeds;
};

/// Network density-speed relation. Immutable after construction.
class VelocityFunction {
 public:
  explicit VelocityFunction(Greenshields law);
  explicit VelocityFunction(ConstantSpeed law);
  explicit VelocityFunction(TabulatedSpeed law);  // validates breakpoints

  static VelocityFunction greenshields(double free_flow_speed, double jam_density) {
    return VelocityFunction(Greenshields{free_flow_speed, jam_density});
  }
  static VelocityFunction constant(double value) {
    return VelocityFunction(ConstantSpeed{value});
  }

  /// Speed at density k >= 0. Throws std::domain_error for negative k.
  double operator()(double density) const;

  /// Upper bound on V over [0, inf).
  double max_speed() const;

  /// Finite Lipschitz bound of the law.
  double lipschitz_bound() const;

  /// Minimum speed over the density interval [lo, hi].
  double min_speed_on(double lo, double hi) const;

  const std::variant<Greenshields, ConstantSpeed, TabulatedSpeed>& law() const {
    return law_;
  }

 private:
  std::variant<Greenshields, ConstantSpeed, TabulatedSpeed> law_;
};

}  // namespace bathtub
