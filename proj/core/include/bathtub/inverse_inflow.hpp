#pragma once

#include <span>
#include <string>
#include <vector>

#include "bathtub/scenario.hpp"
#include "bathtub/series.hpp"

namespace bathtub {

enum class InverseMethod { explicit_scheme, successive, uniform_recursion };

const char* to_string(InverseMethod method);

struct IterationDiagnostics {
  std::vector<double> update_norms;  // sup-norm change per outer iteration
  int iterations = 0;
  bool converged = true;
};

/// Recovered mass curve, characteristic shift and piecewise inflow rates.
/// inflow[n] approximates the mean of f over [t_n, t_{n+1}); it has one
/// fewer entry than the grid.
struct Reconstruction {
  std::vector<double> times;
  std::vector<double> xi;
  std::vector<double> delta;
  std::vector<double> inflow;
  InverseMethod method = InverseMethod::explicit_scheme;
  IterationDiagnostics diagnostics;

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// One-pass reconstruction from the exit trace: advances the shift with the
/// already-computed masses, evaluates the integrated source identity with
/// left-point quadrature and a telescoped distribution-drift sum, then
/// recovers the rates by a difference quotient. Cost O(N^2).
/// Requires phi(t, 0) > 0 on the mesh.
Reconstruction reconstruct_explicit(const BoundaryTrace& trace, const Scenario& scenario);

struct VolterraSolution {
  MassCurve mass;
  IterationDiagnostics diagnostics;
};

/// Successive approximations for the mass curve, starting from zero and
/// re-evaluating the fixed-point map on the trace mesh each sweep. Needs a
/// twice-differentiable distribution; the uniform law is accepted too (its
/// derivative terms vanish), which is valid while xi(t) stays below the
/// kernel length. Throws NonConvergenceError with the update history when
/// the budget is exhausted.
VolterraSolution solve_volterra_successive(const BoundaryTrace& trace,
                                           const Scenario& scenario, double tol,
                                           int max_iter);

/// Successive scheme for the uniform distribution past the time where the
/// support edge reaches the exit: two-branch update with a delayed-time
/// lookup eta resolved by bracketing the partial shift sums and linear
/// interpolation. Requires a positive minimum speed.
VolterraSolution solve_uniform_recursion(const BoundaryTrace& trace,
                                         const Scenario& scenario, double tol,
                                         int max_iter);

/// Difference-quotient recovery of the rates from a mass curve and the
/// trace sampled on the same mesh. The method tag records which solver
/// produced the mass curve.
Reconstruction recover_f(const MassCurve& mass, const BoundaryTrace& trace,
                         const Scenario& scenario,
                         InverseMethod method = InverseMethod::successive);

/// F(t_n) = dt * sum of recovered rates below n. Same length as times.
std::vector<double> cumulative_inflow(const Reconstruction& rec);

/// The telescoped drift sum
///   sum_m delta_m (phi(t_{m+1}, xi_n - xi_{m+1}) - phi(t_m, xi_n - xi_m))
/// as used by the explicit scheme; exposed for direct verification.
double distribution_drift_term(const InflowDistribution& distribution,
                               std::span<const double> times,
                               std::span<const double> xi,
                               std::span<const double> delta, int n);

}  // namespace bathtub
