#pragma once

#include <vector>

#include "bathtub/scenario.hpp"
#include "bathtub/series.hpp"

namespace bathtub {

/// Spatial nodes and the interpolated (entry time, rate, speed) data used by
/// the triangular solve. Nodes beyond the reachable distance xi(T) are
/// excluded and counted.
struct RecoveryNodes {
  std::vector<double> positions;    // x_0 = 0 .. x_J, spacing dx
  std::vector<double> entry_times;  // tau_j with xi(tau_j) = x_j
  std::vector<double> rates;        // f interpolated at the bracketing samples
  std::vector<double> speeds;       // v interpolated at the bracketing samples
  double dx = 0.0;
  int excluded = 0;  // nodes beyond the reachable interval
};

/// Recovered distribution values phi_hat(x_j) on [0, xi(T)].
struct DistributionRecovery {
  std::vector<double> positions;
  std::vector<double> values;  // phi_hat, already divided by the node spacing
  RecoveryNodes nodes;
};

/// Forward-Euler integration of the mass balance using the known inflow
/// rate and the observed trace, plus the left-sum characteristic shift.
MassCurve integrate_delta_xi(const BoundaryTrace& trace, const Scenario& scenario);

/// Node data on the uniform spatial mesh with spacing max_speed * T /
/// num_nodes: each admitted node is bracketed in the strictly increasing
/// shift sequence and (entry time, rate, speed) follow by the convex
/// combination of the bracketing samples.
RecoveryNodes interpolate_nodes(const MassCurve& mass, const Scenario& scenario,
                                int num_nodes);

/// Forward substitution on the lower-triangular system linking the trace to
/// the unknown distribution weights; the unknowns carry the quadrature
/// weight dx, so the output is divided by dx. Requires f(0) > 0.
DistributionRecovery solve_triangular(const BoundaryTrace& trace,
                                      const RecoveryNodes& nodes,
                                      const Scenario& scenario);

}  // namespace bathtub
