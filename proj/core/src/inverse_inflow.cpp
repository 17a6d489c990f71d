#include "bathtub/inverse_inflow.hpp"

#include <algorithm>
#include <cmath>

#include "bathtub/errors.hpp"

namespace bathtub {

const char* to_string(InverseMethod method) {
  switch (method) {
    case InverseMethod::explicit_scheme: return "explicit";
    case InverseMethod::successive: return "successive";
    case InverseMethod::uniform_recursion: return "uniform-recursion";
  }
  return "unknown";
}

namespace {

double require_uniform_mesh(const BoundaryTrace& trace) {
  if (trace.size() < 2) {
    throw ConfigurationError("trace needs at least two samples");
  }
  double dt = trace.times[1] - trace.times[0];
  if (!(dt > 0.0)) throw ConfigurationError("trace times must be increasing");
  double scale = std::max(1.0, std::abs(trace.times.back()));
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (std::abs(trace.times[i] - static_cast<double>(i) * dt) > 1e-9 * scale) {
      throw ConfigurationError("trace must be sampled on a uniform mesh");
    }
  }
  return dt;
}

}  // namespace

double distribution_drift_term(const InflowDistribution& distribution,
                               std::span<const double> times,
                               std::span<const double> xi,
                               std::span<const double> delta, int n) {
  double sum = 0.0;
  std::size_t sn = static_cast<std::size_t>(n);
  double prev = distribution(times[0], xi[sn] - xi[0]);
  for (std::size_t m = 0; m + 1 <= sn; ++m) {
    double next = distribution(times[m + 1], xi[sn] - xi[m + 1]);
    sum += delta[m] * (next - prev);
    prev = next;
  }
  return sum;
}

Reconstruction reconstruct_explicit(const BoundaryTrace& trace, const Scenario& s) {
  double dt = require_uniform_mesh(trace);
  std::size_t n_samples = trace.size();
  std::size_t steps = n_samples - 1;

  Reconstruction rec;
  rec.method = InverseMethod::explicit_scheme;
  rec.times = trace.times;
  rec.xi.assign(n_samples, 0.0);
  rec.delta.assign(n_samples, 0.0);
  rec.inflow.assign(steps, 0.0);

  const double dbar = s.initial_mass();
  rec.delta[0] = dbar;

  std::vector<double> speeds(n_samples, 0.0);
  speeds[0] = speed_at_mass(s, dbar);

  // phi values along the current row: w[m] = phi(t_m, xi_n - xi_m). Built
  // fresh for each n; w[n] doubles as phi(t_n, 0).
  std::vector<double> w(n_samples, 0.0);

  for (std::size_t n = 1; n <= steps; ++n) {
    rec.xi[n] = rec.xi[n - 1] + dt * speeds[n - 1];

    for (std::size_t m = 0; m <= n; ++m) {
      w[m] = s.distribution(rec.times[m], rec.xi[n] - rec.xi[m]);
    }
    double exit_weight = w[n];
    if (!(exit_weight > 0.0)) {
      throw AssumptionViolation("distribution weight at the exit vanishes at t = " +
                                std::to_string(rec.times[n]) +
                                "; the scheme cannot divide by it");
    }

    double quad = 0.0;   // left-point sum of v * k * phi
    double drift = 0.0;  // telescoped distribution drift
    for (std::size_t m = 0; m < n; ++m) {
      quad += speeds[m] * trace.values[m] * w[m];
      drift += rec.delta[m] * (w[m + 1] - w[m]);
    }
    quad *= dt;

    rec.delta[n] = (trace.values[n] - s.initial(rec.xi[n]) +
                    dbar * s.distribution(0.0, rec.xi[n]) - quad + drift) /
                   exit_weight;
    speeds[n] = speed_at_mass(s, rec.delta[n]);
  }

  for (std::size_t n = 0; n < steps; ++n) {
    rec.inflow[n] =
        (rec.delta[n + 1] - rec.delta[n]) / dt + speeds[n] * trace.values[n];
  }
  return rec;
}

VolterraSolution solve_volterra_successive(const BoundaryTrace& trace,
                                           const Scenario& s, double tol,
                                           int max_iter) {
  double dt = require_uniform_mesh(trace);
  if (!s.distribution.twice_differentiable() &&
      !std::holds_alternative<UniformDistribution>(s.distribution.law())) {
    throw AssumptionViolation(
        "successive approximations need a twice-differentiable or uniform "
        "inflow distribution");
  }
  if (max_iter < 1) throw ConfigurationError("iteration budget must be >= 1");

  std::size_t n_samples = trace.size();
  const double dbar = s.initial_mass();
  const auto& t = trace.times;

  std::vector<double> delta(n_samples, 0.0);
  std::vector<double> next(n_samples, 0.0);
  std::vector<double> speeds(n_samples, 0.0);
  std::vector<double> xi(n_samples, 0.0);

  IterationDiagnostics diag;
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t m = 0; m < n_samples; ++m) speeds[m] = speed_at_mass(s, delta[m]);
    for (std::size_t m = 1; m < n_samples; ++m) xi[m] = xi[m - 1] + dt * speeds[m - 1];

    next[0] = dbar;
    for (std::size_t n = 1; n < n_samples; ++n) {
      double exit_weight = s.distribution(t[n], 0.0);
      if (!(exit_weight > 0.0)) {
        throw AssumptionViolation("distribution weight at the exit vanishes at t = " +
                                  std::to_string(t[n]));
      }
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        double arg = xi[n] - xi[m];
        acc += speeds[m] * (trace.values[m] * s.distribution(t[m], arg) +
                            delta[m] * s.distribution.dx(t[m], arg)) -
               delta[m] * s.distribution.dt(t[m], arg);
      }
      acc *= dt;
      next[n] = (trace.values[n] - s.initial(xi[n]) +
                 dbar * s.distribution(0.0, xi[n]) - acc) /
                exit_weight;
    }

    double update = 0.0;
    for (std::size_t m = 0; m < n_samples; ++m) {
      update = std::max(update, std::abs(next[m] - delta[m]));
    }
    diag.update_norms.push_back(update);
    diag.iterations = it + 1;
    delta.swap(next);

    if (!std::isfinite(update)) break;  // hopeless; report the history
    if (update <= tol) {
      // Publish the shift consistent with the converged masses.
      for (std::size_t m = 1; m < n_samples; ++m) {
        xi[m] = xi[m - 1] + dt * speed_at_mass(s, delta[m - 1]);
      }
      VolterraSolution out;
      out.mass.times = t;
      out.mass.delta = std::move(delta);
      out.mass.xi = std::move(xi);
      out.diagnostics = std::move(diag);
      return out;
    }
  }
  throw NonConvergenceError(
      "successive approximations did not reach tolerance " + std::to_string(tol) +
          " within " + std::to_string(diag.iterations) + " sweeps",
      diag.update_norms);
}

VolterraSolution solve_uniform_recursion(const BoundaryTrace& trace, const Scenario& s,
                                         double tol, int max_iter) {
  double dt = require_uniform_mesh(trace);
  if (!std::holds_alternative<UniformDistribution>(s.distribution.law())) {
    throw AssumptionViolation("the recursion solver requires a uniform distribution");
  }
  if (!(s.min_speed() > 0.0)) {
    throw AssumptionViolation(
        "the delayed-time lookup needs a positive minimum speed over the "
        "reachable densities");
  }
  if (max_iter < 1) throw ConfigurationError("iteration budget must be >= 1");

  const double L = s.kernel_length;
  std::size_t n_samples = trace.size();
  const auto& t = trace.times;
  const auto& k = trace.values;
  const double dbar = s.initial_mass();

  std::vector<double> delta(n_samples, 0.0);
  std::vector<double> next(n_samples, 0.0);
  std::vector<double> speeds(n_samples, 0.0);
  std::vector<double> xi(n_samples, 0.0);
  std::vector<double> flux(n_samples, 0.0);  // left partial sums of v * k

  IterationDiagnostics diag;
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t m = 0; m < n_samples; ++m) speeds[m] = speed_at_mass(s, delta[m]);
    for (std::size_t m = 1; m < n_samples; ++m) {
      xi[m] = xi[m - 1] + dt * speeds[m - 1];
      flux[m] = flux[m - 1] + dt * speeds[m - 1] * k[m - 1];
    }

    next[0] = dbar;
    for (std::size_t n = 1; n < n_samples; ++n) {
      double tail = L * (k[n] - s.initial(xi[n]));
      if (xi[n] <= L) {
        next[n] = dbar - flux[n] + tail;
        continue;
      }
      // Delayed time eta with xi(t_n) - xi(eta) = L: bracket the partial
      // sums, then interpolate inside the bracketing cell.
      double target = xi[n] - L;
      auto hit = std::lower_bound(xi.begin(), xi.begin() + static_cast<long>(n), target);
      std::size_t p = static_cast<std::size_t>(hit - xi.begin());
      if (p == 0) p = 1;
      if (p >= n) {
        throw NumericalError("delayed-time lookup landed on the current sample");
      }
      double weight = (target - xi[p - 1]) / (xi[p] - xi[p - 1]);
      double eta = t[p - 1] + weight * dt;

      // New iterate at eta (entries below n are already updated), trace and
      // old iterate interpolated at eta for the fractional head cell.
      double delta_at_eta = next[p - 1] + weight * (next[p] - next[p - 1]);
      double k_at_eta = k[p - 1] + weight * (k[p] - k[p - 1]);
      double old_at_eta = delta[p - 1] + weight * (delta[p] - delta[p - 1]);
      double head = (t[p] - eta) * speed_at_mass(s, old_at_eta) * k_at_eta;
      double body = flux[n] - flux[p];

      next[n] = delta_at_eta - (head + body) + tail;
    }

    double update = 0.0;
    for (std::size_t m = 0; m < n_samples; ++m) {
      update = std::max(update, std::abs(next[m] - delta[m]));
    }
    diag.update_norms.push_back(update);
    diag.iterations = it + 1;
    delta.swap(next);

    if (!std::isfinite(update)) break;
    if (update <= tol) {
      for (std::size_t m = 1; m < n_samples; ++m) {
        xi[m] = xi[m - 1] + dt * speed_at_mass(s, delta[m - 1]);
      }
      VolterraSolution out;
      out.mass.times = t;
      out.mass.delta = std::move(delta);
      out.mass.xi = std::move(xi);
      out.diagnostics = std::move(diag);
      return out;
    }
  }
  throw NonConvergenceError(
      "recursion sweeps did not reach tolerance " + std::to_string(tol) + " within " +
          std::to_string(diag.iterations) + " iterations",
      diag.update_norms);
}

Reconstruction recover_f(const MassCurve& mass, const BoundaryTrace& trace,
                         const Scenario& s, InverseMethod method) {
  if (mass.size() != trace.size()) {
    throw ConfigurationError("mass curve and trace live on different meshes");
  }
  double dt = require_uniform_mesh(trace);
  if (std::abs(mass.dt() - dt) > 1e-9 * std::max(1.0, dt)) {
    throw ConfigurationError("mass curve and trace use different time steps");
  }

  std::size_t steps = trace.size() - 1;
  Reconstruction rec;
  rec.method = method;
  rec.times = trace.times;
  rec.delta = mass.delta;
  rec.inflow.assign(steps, 0.0);

  std::vector<double> speeds(trace.size());
  for (std::size_t n = 0; n < trace.size(); ++n) {
    speeds[n] = speed_at_mass(s, mass.delta[n]);
  }
  if (!mass.xi.empty()) {
    rec.xi = mass.xi;
  } else {
    rec.xi.assign(trace.size(), 0.0);
    for (std::size_t n = 1; n < trace.size(); ++n) {
      rec.xi[n] = rec.xi[n - 1] + dt * speeds[n - 1];
    }
  }
  for (std::size_t n = 0; n < steps; ++n) {
    rec.inflow[n] =
        (mass.delta[n + 1] - mass.delta[n]) / dt + speeds[n] * trace.values[n];
  }
  return rec;
}

std::vector<double> cumulative_inflow(const Reconstruction& rec) {
  std::vector<double> cumulative(rec.times.size(), 0.0);
  double dt = rec.dt();
  for (std::size_t n = 1; n < rec.times.size(); ++n) {
    cumulative[n] = cumulative[n - 1] + dt * rec.inflow[n - 1];
  }
  return cumulative;
}

}  // namespace bathtub
