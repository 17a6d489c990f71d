#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "bathtub/distribution.hpp"
#include "bathtub/inflow.hpp"
#include "bathtub/initial_density.hpp"
#include "bathtub/velocity.hpp"

namespace bathtub {

/// Full problem description. The nonlocal averaging kernel is fixed to the
/// constant weight 1/kernel_length on [0, kernel_length].
struct Scenario {
  VelocityFunction velocity;
  double kernel_length = 1.0;  // L
  InflowRate inflow;
  InflowDistribution distribution;
  InitialDensity initial;
  double horizon = 1.0;  // T

  double max_speed() const { return velocity.max_speed(); }

  /// Total initial mass (integral of the initial density).
  double initial_mass() const { return initial.mass(kernel_length); }

  /// A-priori bound on the averaged density the solver can reach:
  /// (initial mass + total inflow) / kernel_length.
  double reachable_density_bound() const {
    return (initial_mass() + inflow.integral(0.0, horizon)) / kernel_length;
  }

  /// Minimum speed over the reachable density range.
  double min_speed() const {
    return velocity.min_speed_on(0.0, reachable_density_bound());
  }
};

/// Speed at total mass `mass`. Iterative solvers produce transiently
/// negative mass values near zero; the law is extended constantly to the
/// left so they stay evaluable (and Lipschitz).
inline double speed_at_mass(const Scenario& scenario, double mass) {
  return scenario.velocity(std::max(mass, 0.0) / scenario.kernel_length);
}

struct ValidationCheck {
  std::string name;
  bool passed = false;
  bool required = true;  // informational checks only select solver paths
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_required_passed() const;
  const ValidationCheck* find(const std::string& name) const;
  bool passed(const std::string& name) const;
};

/// Checks the model preconditions the solvers rely on and reports each by
/// name. Never throws; downstream code selects paths from the report.
ValidationReport validate(const Scenario& scenario);

}  // namespace bathtub
