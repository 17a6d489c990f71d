#pragma once

#include <cstdint>
#include <vector>

namespace bathtub {

struct Scenario;

/// Uniform space-time mesh for the finite-difference solver. The spatial
/// domain is [0, extent] with extent >= kernel length; the solution is
/// supported there, so nothing is lost by the truncation.
struct SpaceTimeGrid {
  double dt = 0.0;
  double dx = 0.0;
  double horizon = 0.0;  // T
  double extent = 0.0;   // X_max

  int num_steps() const;  // N_t: time levels are 0..N_t
  int num_cells() const;  // N_x: nodes are 0..N_x, node N_x pinned to zero

  /// dt = dx = step over [0, T] x [0, L].
  static SpaceTimeGrid square(double step, const Scenario& scenario);

  /// Throws ConfigurationError unless vmax * dt / dx <= 1.
  void require_cfl(double max_speed) const;
};

/// Time series of the exit density k(t, 0). The noise metadata records how
/// the series was corrupted (level 0 means exact).
struct BoundaryTrace {
  std::vector<double> times;
  std::vector<double> values;
  double noise_level = 0.0;
  std::uint64_t noise_seed = 0;

  double dt() const;
  std::size_t size() const { return times.size(); }
};

/// Subsample every `stride`-th entry (stride >= 1), keeping sample 0.
BoundaryTrace subsample(const BoundaryTrace& trace, int stride);

/// Total active mass delta(t); xi(t) (cumulative distance traveled) is
/// filled by the solvers that track characteristics.
struct MassCurve {
  std::vector<double> times;
  std::vector<double> delta;
  std::vector<double> xi;  // may be empty

  double dt() const;
  std::size_t size() const { return times.size(); }
};

/// Dense space-time density table from the finite-difference solver.
/// Memory is O(N_t * N_x); prefer the streaming solver entry point for
/// fine meshes.
struct DensityField {
  SpaceTimeGrid grid;
  std::vector<double> values;  // row-major, (N_t + 1) x (N_x + 1)

  double at(int step, int cell) const;
  double& at(int step, int cell);
  double time_of(int step) const { return step * grid.dt; }
  double position_of(int cell) const { return cell * grid.dx; }
};

}  // namespace bathtub
