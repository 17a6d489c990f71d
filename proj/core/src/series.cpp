#include "bathtub/series.hpp"

#include <cmath>

#include "bathtub/errors.hpp"
#include "bathtub/scenario.hpp"

namespace bathtub {

int SpaceTimeGrid::num_steps() const {
  return static_cast<int>(std::llround(horizon / dt));
}

int SpaceTimeGrid::num_cells() const {
  return static_cast<int>(std::llround(extent / dx));
}

SpaceTimeGrid SpaceTimeGrid::square(double step, const Scenario& scenario) {
  SpaceTimeGrid g;
  g.dt = step;
  g.dx = step;
  g.horizon = scenario.horizon;
  g.extent = scenario.kernel_length;
  return g;
}

void SpaceTimeGrid::require_cfl(double max_speed) const {
  if (!(dt > 0.0) || !(dx > 0.0) || !(horizon > 0.0) || !(extent > 0.0)) {
    throw ConfigurationError("mesh steps and extents must be positive");
  }
  double margin = max_speed * dt / dx;
  if (margin > 1.0 + 1e-12) {
    throw ConfigurationError("CFL margin " + std::to_string(margin) +
                             " exceeds 1; refine dt or coarsen dx");
  }
}

double BoundaryTrace::dt() const {
  return times.size() > 1 ? times[1] - times[0] : 0.0;
}

BoundaryTrace subsample(const BoundaryTrace& trace, int stride) {
  if (stride < 1) throw ConfigurationError("subsample stride must be >= 1");
  if (stride == 1) return trace;
  if ((trace.times.size() - 1) % static_cast<std::size_t>(stride) != 0) {
    throw ConfigurationError("subsample stride must divide the sample count");
  }
  BoundaryTrace out;
  out.noise_level = trace.noise_level;
  out.noise_seed = trace.noise_seed;
  for (std::size_t i = 0; i < trace.times.size(); i += static_cast<std::size_t>(stride)) {
    out.times.push_back(trace.times[i]);
    out.values.push_back(trace.values[i]);
  }
  return out;
}

double MassCurve::dt() const {
  return times.size() > 1 ? times[1] - times[0] : 0.0;
}

double DensityField::at(int step, int cell) const {
  return values[static_cast<std::size_t>(step) *
                    static_cast<std::size_t>(grid.num_cells() + 1) +
                static_cast<std::size_t>(cell)];
}

double& DensityField::at(int step, int cell) {
  return values[static_cast<std::size_t>(step) *
                    static_cast<std::size_t>(grid.num_cells() + 1) +
                static_cast<std::size_t>(cell)];
}

}  // namespace bathtub
