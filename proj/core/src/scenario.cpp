#include "bathtub/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bathtub {

bool ValidationReport::all_required_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed || !c.required; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool ValidationReport::passed(const std::string& name) const {
  const ValidationCheck* c = find(name);
  return c != nullptr && c->passed;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport report;
  auto add = [&report](std::string name, bool ok, bool required, std::string detail) {
    report.checks.push_back({std::move(name), ok, required, std::move(detail)});
  };

  add("kernel-length-positive", s.kernel_length > 0.0, true,
      "L = " + num(s.kernel_length));
  add("horizon-positive", s.horizon > 0.0, true, "T = " + num(s.horizon));

  // Velocity law: nonnegative by construction; record the bounds.
  add("velocity-bounded", std::isfinite(s.max_speed()) && s.max_speed() >= 0.0, true,
      "max speed " + num(s.max_speed()));
  add("velocity-lipschitz", std::isfinite(s.velocity.lipschitz_bound()), true,
      "slope bound " + num(s.velocity.lipschitz_bound()));
  {
    double vmin = s.min_speed();
    add("min-speed-positive", vmin > 0.0, true,
        "min speed over reachable densities " + num(vmin));
  }

  // Inflow rate.
  {
    double finf = s.inflow.inf_on(s.horizon);
    add("inflow-nonnegative", finf >= 0.0, true, "inf f = " + num(finf));
    double f0 = s.inflow(0.0);
    add("inflow-start-positive", f0 > 0.0, true, "f(0) = " + num(f0));
  }

  // Inflow distribution: unit mass at sampled times, positive exit weight.
  {
    bool normalized = true;
    double worst = 0.0;
    for (int i = 0; i <= 16; ++i) {
      double t = s.horizon * i / 16.0;
      double defect = std::abs(s.distribution.mass(t) - 1.0);
      worst = std::max(worst, defect);
      if (defect > 1e-6) normalized = false;
    }
    add("distribution-normalized", normalized, true,
        "max |mass - 1| = " + num(worst));

    double pmin = s.distribution.min_at_exit(s.horizon);
    add("distribution-exit-positive", pmin > 0.0, true,
        "min phi(t, 0) = " + num(pmin));

    add("distribution-smooth", s.distribution.twice_differentiable(), false,
        s.distribution.twice_differentiable() ? "twice differentiable"
                                              : "not twice differentiable");

    double tail = 0.0;
    for (int i = 0; i <= 16; ++i) {
      tail = std::max(tail,
                      s.distribution.mass_outside(s.horizon * i / 16.0, s.kernel_length));
    }
    add("distribution-kernel-support", tail < 1e-8, false,
        "mass outside [0, L] = " + num(tail));
  }

  // Initial density.
  add("initial-support", s.initial.supported_within(s.kernel_length), true,
      "supported on [0, L]");

  return report;
}

}  // namespace bathtub
