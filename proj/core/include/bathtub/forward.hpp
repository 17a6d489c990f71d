#pragma once

#include <utility>
#include <vector>

#include "bathtub/scenario.hpp"
#include "bathtub/series.hpp"

namespace bathtub {

/// Streaming result of the finite-difference solve: the exit trace, the
/// discrete mass curve (composite trapezoid over each row), the per-step
/// row maxima and the global minimum, without storing the field.
struct ForwardRun {
  BoundaryTrace trace;
  MassCurve mass;
  std::vector<double> row_max;
  double min_value = 0.0;
};

/// Explicit upwind march for the transport balance. Transport speed in x is
/// -v(t) <= 0, so the scheme differences toward larger x and pins a zero
/// ghost value at the right edge; the outflow boundary x = 0 needs no
/// condition. Requires the CFL margin max_speed * dt / dx <= 1.
DensityField solve_upwind(const Scenario& scenario, const SpaceTimeGrid& grid);

/// Same march with O(N_x) memory; use for fine meshes.
ForwardRun solve_upwind_trace(const Scenario& scenario, const SpaceTimeGrid& grid);

/// Semi-analytic marcher built on the solution representation along
/// characteristics: advances the shift xi and the total mass delta with
/// left-point quadrature and evaluates the exit density from the data
/// directly. Cost O(N^2). Returns the mass curve (with xi) and the trace.
std::pair<MassCurve, BoundaryTrace> solve_characteristics(const Scenario& scenario,
                                                          double dt);

/// Per-step defect of the discrete mass balance
///   (delta[n+1] - delta[n]) / dt - f(t_n) + v_n * k[n][0]
/// with delta taken from trapezoid row sums of the field. A solver health
/// check: first-order small for consistent runs.
std::vector<double> mass_balance_residual(const DensityField& field,
                                          const Scenario& scenario);

}  // namespace bathtub
