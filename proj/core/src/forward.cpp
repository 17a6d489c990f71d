#include "bathtub/forward.hpp"

#include <algorithm>
#include <cmath>

#include "bathtub/errors.hpp"

namespace bathtub {

namespace {

class UpwindStepper {
 public:
  UpwindStepper(const Scenario& s, const SpaceTimeGrid& grid)
      : s_(s),
        grid_(grid),
        num_cells_(grid.num_cells()),
        row_(static_cast<std::size_t>(num_cells_) + 1, 0.0),
        source_shape_(static_cast<std::size_t>(num_cells_), 0.0),
        static_source_(s.distribution.time_independent()) {
    grid.require_cfl(s.max_speed());
    if (grid.extent < s.kernel_length) {
      throw ConfigurationError("spatial extent must cover the kernel length");
    }
    for (int j = 0; j < num_cells_; ++j) {
      row_[static_cast<std::size_t>(j)] = s.initial(grid.dx * j);
    }
    row_[static_cast<std::size_t>(num_cells_)] = 0.0;  // ghost
    if (static_source_) {
      for (int j = 0; j < num_cells_; ++j) {
        source_shape_[static_cast<std::size_t>(j)] = s.distribution(0.0, grid.dx * j);
      }
    }
  }

  const std::vector<double>& row() const { return row_; }

  double exit_value() const { return row_[0]; }

  double row_max() const {
    return *std::max_element(row_.begin(), row_.end());
  }

  double row_min() const {
    return *std::min_element(row_.begin(), row_.end());
  }

  // Composite trapezoid over nodes 0..N_x.
  double row_mass() const {
    double sum = 0.5 * (row_.front() + row_.back());
    for (int j = 1; j < num_cells_; ++j) sum += row_[static_cast<std::size_t>(j)];
    return sum * grid_.dx;
  }

  // Advances one step from time level n. Throws NumericalError when the
  // nonlocal average turns non-finite (any NaN in the row poisons it).
  void advance(int n) {
    double t = grid_.dt * n;
    // Left-endpoint average over cells below the kernel length.
    double avg = 0.0;
    int kernel_cells = static_cast<int>(std::llround(s_.kernel_length / grid_.dx));
    kernel_cells = std::min(kernel_cells, num_cells_);
    for (int j = 0; j < kernel_cells; ++j) avg += row_[static_cast<std::size_t>(j)];
    avg *= grid_.dx / s_.kernel_length;
    if (!std::isfinite(avg)) {
      throw NumericalError("non-finite density detected at t = " + std::to_string(t));
    }
    double v = s_.velocity(std::max(avg, 0.0));
    double lam = v * grid_.dt / grid_.dx;
    double f = s_.inflow(t);
    if (static_source_) {
      for (int j = 0; j < num_cells_; ++j) {
        std::size_t sj = static_cast<std::size_t>(j);
        row_[sj] += lam * (row_[sj + 1] - row_[sj]) + grid_.dt * f * source_shape_[sj];
      }
    } else {
      for (int j = 0; j < num_cells_; ++j) {
        std::size_t sj = static_cast<std::size_t>(j);
        row_[sj] += lam * (row_[sj + 1] - row_[sj]) +
                    grid_.dt * f * s_.distribution(t, grid_.dx * j);
      }
    }
    row_[static_cast<std::size_t>(num_cells_)] = 0.0;
  }

 private:
  const Scenario& s_;
  SpaceTimeGrid grid_;
  int num_cells_;
  std::vector<double> row_;
  std::vector<double> source_shape_;
  bool static_source_;
};

}  // namespace

DensityField solve_upwind(const Scenario& scenario, const SpaceTimeGrid& grid) {
  UpwindStepper stepper(scenario, grid);
  int steps = grid.num_steps();
  int cells = grid.num_cells();

  // ~1.2 GB of doubles; finer meshes go through the streaming entry point.
  constexpr std::size_t kMaxEntries = 150'000'000;
  std::size_t entries = static_cast<std::size_t>(steps + 1) *
                        static_cast<std::size_t>(cells + 1);
  if (entries > kMaxEntries) {
    throw ConfigurationError(
        "dense field would hold " + std::to_string(entries) +
        " entries; coarsen the mesh or use the streaming solver");
  }

  DensityField field;
  field.grid = grid;
  field.values.assign(static_cast<std::size_t>(steps + 1) *
                          static_cast<std::size_t>(cells + 1),
                      0.0);
  for (int n = 0;; ++n) {
    std::copy(stepper.row().begin(), stepper.row().end(),
              field.values.begin() + static_cast<std::size_t>(n) *
                                         static_cast<std::size_t>(cells + 1));
    if (n == steps) break;
    stepper.advance(n);
  }
  return field;
}

ForwardRun solve_upwind_trace(const Scenario& scenario, const SpaceTimeGrid& grid) {
  UpwindStepper stepper(scenario, grid);
  int steps = grid.num_steps();

  ForwardRun run;
  run.trace.times.reserve(static_cast<std::size_t>(steps) + 1);
  run.trace.values.reserve(static_cast<std::size_t>(steps) + 1);
  run.mass.times.reserve(static_cast<std::size_t>(steps) + 1);
  run.mass.delta.reserve(static_cast<std::size_t>(steps) + 1);
  run.row_max.reserve(static_cast<std::size_t>(steps) + 1);
  run.min_value = 0.0;
  for (int n = 0;; ++n) {
    run.trace.times.push_back(grid.dt * n);
    run.trace.values.push_back(stepper.exit_value());
    run.mass.times.push_back(grid.dt * n);
    run.mass.delta.push_back(stepper.row_mass());
    run.row_max.push_back(stepper.row_max());
    run.min_value = std::min(run.min_value, stepper.row_min());
    if (n == steps) break;
    stepper.advance(n);
  }
  return run;
}

std::pair<MassCurve, BoundaryTrace> solve_characteristics(const Scenario& scenario,
                                                          double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
  int steps = static_cast<int>(std::llround(scenario.horizon / dt));

  MassCurve mass;
  BoundaryTrace trace;
  mass.times.resize(static_cast<std::size_t>(steps) + 1);
  mass.delta.resize(static_cast<std::size_t>(steps) + 1);
  mass.xi.resize(static_cast<std::size_t>(steps) + 1);
  trace.times.resize(static_cast<std::size_t>(steps) + 1);
  trace.values.resize(static_cast<std::size_t>(steps) + 1);

  std::vector<double> f_at(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) f_at[static_cast<std::size_t>(n)] = scenario.inflow(dt * n);

  mass.delta[0] = scenario.initial_mass();
  mass.xi[0] = 0.0;
  double instability_tol = 1e-6 * (1.0 + mass.delta[0]);

  for (int n = 0; n <= steps; ++n) {
    std::size_t sn = static_cast<std::size_t>(n);
    double t = dt * n;
    mass.times[sn] = t;
    trace.times[sn] = t;

    // Exit density from the characteristics representation, left-point sum.
    double k0 = scenario.initial(mass.xi[sn]);
    for (int m = 0; m < n; ++m) {
      std::size_t sm = static_cast<std::size_t>(m);
      k0 += dt * f_at[sm] * scenario.distribution(dt * m, mass.xi[sn] - mass.xi[sm]);
    }
    trace.values[sn] = k0;

    if (n < steps) {
      double v = speed_at_mass(scenario, mass.delta[sn]);
      mass.delta[sn + 1] = mass.delta[sn] + dt * (f_at[sn] - v * k0);
      mass.xi[sn + 1] = mass.xi[sn] + dt * v;
      if (mass.delta[sn + 1] < -instability_tol) {
        throw NumericalError("total mass turned negative at t = " +
                             std::to_string(t + dt) + "; the march is unstable");
      }
    }
  }
  return {std::move(mass), std::move(trace)};
}

std::vector<double> mass_balance_residual(const DensityField& field,
                                          const Scenario& scenario) {
  const SpaceTimeGrid& grid = field.grid;
  int steps = grid.num_steps();
  int cells = grid.num_cells();

  auto row_mass = [&](int n) {
    double sum = 0.5 * (field.at(n, 0) + field.at(n, cells));
    for (int j = 1; j < cells; ++j) sum += field.at(n, j);
    return sum * grid.dx;
  };

  std::vector<double> residual(static_cast<std::size_t>(steps));
  double prev = row_mass(0);
  for (int n = 0; n < steps; ++n) {
    double next = row_mass(n + 1);
    double v = speed_at_mass(scenario, prev);
    residual[static_cast<std::size_t>(n)] =
        (next - prev) / grid.dt - scenario.inflow(grid.dt * n) + v * field.at(n, 0);
    prev = next;
  }
  return residual;
}

}  // namespace bathtub
