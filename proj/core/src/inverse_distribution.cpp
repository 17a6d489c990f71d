#include "bathtub/inverse_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "bathtub/errors.hpp"

namespace bathtub {

namespace {

double require_uniform_mesh(const BoundaryTrace& trace) {
  if (trace.size() < 2) throw ConfigurationError("trace needs at least two samples");
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

double interp_series(const std::vector<double>& times, const std::vector<double>& values,
                     double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return values[i - 1] + w * (values[i] - values[i - 1]);
}

}  // namespace

MassCurve integrate_delta_xi(const BoundaryTrace& trace, const Scenario& s) {
  double dt = require_uniform_mesh(trace);
  std::size_t n_samples = trace.size();

  MassCurve mass;
  mass.times = trace.times;
  mass.delta.assign(n_samples, 0.0);
  mass.xi.assign(n_samples, 0.0);

  mass.delta[0] = s.initial_mass();
  for (std::size_t n = 0; n + 1 < n_samples; ++n) {
    double v = speed_at_mass(s, mass.delta[n]);
    mass.delta[n + 1] =
        mass.delta[n] + dt * (s.inflow(trace.times[n]) - v * trace.values[n]);
    mass.xi[n + 1] = mass.xi[n] + dt * v;
  }
  return mass;
}

RecoveryNodes interpolate_nodes(const MassCurve& mass, const Scenario& s,
                                int num_nodes) {
  if (num_nodes < 1) throw ConfigurationError("node count must be >= 1");
  if (mass.xi.empty()) {
    throw ConfigurationError("mass curve lacks the characteristic shift");
  }
  for (std::size_t i = 1; i < mass.xi.size(); ++i) {
    if (!(mass.xi[i] > mass.xi[i - 1])) {
      throw AssumptionViolation(
          "characteristic shift must be strictly increasing (positive speeds)");
    }
  }

  RecoveryNodes nodes;
  nodes.dx = s.max_speed() * s.horizon / num_nodes;
  double reach = mass.xi.back();

  // Node 0 carries the z -> 0 limit data.
  nodes.positions.push_back(0.0);
  nodes.entry_times.push_back(0.0);
  nodes.rates.push_back(s.inflow(0.0));
  nodes.speeds.push_back(speed_at_mass(s, mass.delta.front()));

  for (int j = 1; j <= num_nodes; ++j) {
    double x = nodes.dx * j;
    if (x > reach) {
      nodes.excluded = num_nodes - j + 1;
      break;
    }
    auto it = std::lower_bound(mass.xi.begin(), mass.xi.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - mass.xi.begin());
    if (hi == 0) hi = 1;
    std::size_t lo = hi - 1;
    double w = (x - mass.xi[lo]) / (mass.xi[hi] - mass.xi[lo]);

    double tau = mass.times[lo] + w * (mass.times[hi] - mass.times[lo]);
    double rate = (1.0 - w) * s.inflow(mass.times[lo]) + w * s.inflow(mass.times[hi]);
    double speed = (1.0 - w) * speed_at_mass(s, mass.delta[lo]) +
                   w * speed_at_mass(s, mass.delta[hi]);

    nodes.positions.push_back(x);
    nodes.entry_times.push_back(tau);
    nodes.rates.push_back(rate);
    nodes.speeds.push_back(speed);
  }
  return nodes;
}

DistributionRecovery solve_triangular(const BoundaryTrace& trace,
                                      const RecoveryNodes& nodes, const Scenario& s) {
  if (nodes.positions.empty()) throw ConfigurationError("no recovery nodes");
  double rate0 = nodes.rates.front();
  double speed0 = nodes.speeds.front();
  if (!(rate0 > 0.0)) {
    throw AssumptionViolation("the triangular system is singular: f(0) <= 0");
  }
  if (!(speed0 > 0.0)) {
    throw AssumptionViolation("the triangular system is singular: v(0) <= 0");
  }
  for (std::size_t j = 1; j < nodes.entry_times.size(); ++j) {
    if (!(nodes.entry_times[j] > nodes.entry_times[j - 1])) {
      throw ConfigurationError("entry times must be strictly increasing");
    }
  }

  std::size_t count = nodes.positions.size();
  std::vector<double> weights(count, 0.0);  // phi_l * dx

  // k(tau_j, 0) = kbar(x_j) + sum_{l=1..j} (f_{j-l} / v_{j-l}) * weights[l]
  for (std::size_t j = 1; j < count; ++j) {
    double lhs = interp_series(trace.times, trace.values, nodes.entry_times[j]) -
                 s.initial(nodes.positions[j]);
    double acc = 0.0;
    for (std::size_t l = 1; l < j; ++l) {
      acc += (nodes.rates[j - l] / nodes.speeds[j - l]) * weights[l];
    }
    weights[j] = (lhs - acc) * (speed0 / rate0);
  }

  DistributionRecovery out;
  out.nodes = nodes;
  out.positions.assign(nodes.positions.begin() + 1, nodes.positions.end());
  out.values.resize(count - 1);
  for (std::size_t j = 1; j < count; ++j) {
    out.values[j - 1] = weights[j] / nodes.dx;
  }
  return out;
}

}  // namespace bathtub
