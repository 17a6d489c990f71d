#include <gtest/gtest.h>

#include <cmath>

#include "bathtub/errors.hpp"
#include "bathtub/forward.hpp"
#include "bathtub/inverse_inflow.hpp"
#include "test_support.hpp"

using namespace bathtub;
namespace bt = bathtub::testing;

namespace {

BoundaryTrace exact_trace(const Scenario& s, double forward_dt, double inverse_dt) {
  auto [mass, trace] = solve_characteristics(s, forward_dt);
  int stride = static_cast<int>(std::llround(inverse_dt / forward_dt));
  return subsample(trace, stride);
}

}  // namespace

TEST(Explicit, ZeroDataGivesZeroRates) {
  Scenario s = bt::empty_scenario();
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  Reconstruction rec = reconstruct_explicit(trace, s);
  EXPECT_LE(bt::sup_abs(rec.inflow), 1e-12);
  EXPECT_DOUBLE_EQ(rec.delta.front(), 0.0);
}

TEST(Explicit, ReferenceRoundTripRecoversConstantRate) {
  Scenario s = bt::example("5.1a");
  BoundaryTrace trace = exact_trace(s, 1e-3, 1e-2);
  Reconstruction rec = reconstruct_explicit(trace, s);
  double worst = 0.0;
  for (double f : rec.inflow) worst = std::max(worst, std::abs(f - 0.15));
  EXPECT_LE(worst, 0.01);
  EXPECT_DOUBLE_EQ(rec.xi.front(), 0.0);
  EXPECT_DOUBLE_EQ(rec.delta.front(), s.initial_mass());
  double bound = s.max_speed() * rec.dt() * (1.0 + 1e-12);
  for (std::size_t n = 1; n < rec.xi.size(); ++n) {
    double inc = rec.xi[n] - rec.xi[n - 1];
    EXPECT_GE(inc, 0.0);
    EXPECT_LE(inc, bound);
  }
}

TEST(Explicit, SinusoidalRoundTripWithinRelativeTolerance) {
  Scenario s = bt::example("5.2a");
  BoundaryTrace trace = exact_trace(s, 1e-3, 1e-2);
  Reconstruction rec = reconstruct_explicit(trace, s);
  ErrorMetrics metrics = f_error(rec, s.inflow);
  EXPECT_LE(metrics.l2_rel, 0.05);
}

TEST(Explicit, VanishingExitWeightIsAssumptionViolation) {
  Scenario s = bt::example("5.1a");
  // Tabulated law with zero weight at x = 0.
  s.distribution = InflowDistribution(TabulatedDistribution{
      {0.0}, {0.0, 1.0, 9.0, 10.0}, {{0.0, 0.2, 0.0111111111111, 0.0}}});
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  EXPECT_THROW(reconstruct_explicit(trace, s), AssumptionViolation);
}

TEST(Explicit, ExactDataConvergenceIsFirstOrder) {
  Scenario s = bt::example("5.2b");
  std::vector<double> dts = {4e-2, 2e-2, 1e-2};
  std::vector<double> errors;
  for (double dt : dts) {
    BoundaryTrace trace = exact_trace(s, 1e-3, dt);
    Reconstruction rec = reconstruct_explicit(trace, s);
    errors.push_back(f_error(rec, s.inflow).sup);
  }
  EXPECT_GE(bt::loglog_slope(dts, errors), 0.8);
}

TEST(DriftTerm, VanishesForUniformLawConstantSpeedAndMass) {
  InflowDistribution phi = InflowDistribution::uniform(10.0);
  std::vector<double> times, xi, delta;
  double dt = 0.1, speed = 0.5;
  for (int n = 0; n <= 40; ++n) {
    times.push_back(dt * n);
    xi.push_back(speed * dt * n);  // stays below the kernel length
    delta.push_back(0.7);
  }
  EXPECT_DOUBLE_EQ(distribution_drift_term(phi, times, xi, delta, 40), 0.0);
}

TEST(RecoverF, ZeroCurvesGiveZeroRates) {
  Scenario s = bt::empty_scenario();
  MassCurve mass;
  BoundaryTrace trace;
  for (int n = 0; n <= 10; ++n) {
    mass.times.push_back(0.1 * n);
    mass.delta.push_back(0.0);
    trace.times.push_back(0.1 * n);
    trace.values.push_back(0.0);
  }
  Reconstruction rec = recover_f(mass, trace, s);
  EXPECT_LE(bt::sup_abs(rec.inflow), 1e-15);
}

TEST(RecoverF, ConstantSpeedAlgebraicIdentity) {
  // With delta quadratic in t the quotient picks up exactly half the
  // second-difference term: f_n = f - c (f/L) dt / 2.
  Scenario s = bt::constant_speed_scenario();
  double c = 0.5, f = 0.15, L = 10.0, dt = 1e-2;
  MassCurve mass;
  BoundaryTrace trace;
  for (int n = 0; n <= 800; ++n) {
    double t = dt * n;
    mass.times.push_back(t);
    mass.delta.push_back(f * t - c * (f / L) * t * t / 2.0);
    trace.times.push_back(t);
    trace.values.push_back((f / L) * t);
  }
  Reconstruction rec = recover_f(mass, trace, s);
  double expected = f - c * (f / L) * dt / 2.0;
  for (double fn : rec.inflow) EXPECT_NEAR(fn, expected, 1e-12);
}

TEST(RecoverF, MatchesExplicitSchemeOnItsOwnMassCurve) {
  Scenario s = bt::example("5.1a");
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  Reconstruction direct = reconstruct_explicit(trace, s);
  MassCurve mass;
  mass.times = direct.times;
  mass.delta = direct.delta;
  mass.xi = direct.xi;
  Reconstruction indirect = recover_f(mass, trace, s);
  ASSERT_EQ(direct.inflow.size(), indirect.inflow.size());
  for (std::size_t n = 0; n < direct.inflow.size(); ++n) {
    EXPECT_DOUBLE_EQ(direct.inflow[n], indirect.inflow[n]);
  }
}

TEST(RecoverF, MeshMismatchRejected) {
  Scenario s = bt::empty_scenario();
  MassCurve mass;
  BoundaryTrace trace;
  for (int n = 0; n <= 10; ++n) {
    mass.times.push_back(0.1 * n);
    mass.delta.push_back(0.0);
  }
  for (int n = 0; n <= 20; ++n) {
    trace.times.push_back(0.05 * n);
    trace.values.push_back(0.0);
  }
  EXPECT_THROW(recover_f(mass, trace, s), ConfigurationError);
}

TEST(Volterra, ZeroTraceConvergesImmediately) {
  Scenario s = bt::empty_scenario();
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  VolterraSolution sol = solve_volterra_successive(trace, s, 1e-12, 10);
  EXPECT_LE(sol.diagnostics.iterations, 2);
  EXPECT_LE(bt::sup_abs(sol.mass.delta), 1e-15);
}

TEST(Volterra, AgreesWithExplicitSchemeForUniformLaw) {
  // With the uniform distribution (and the shift below the kernel length)
  // the fixed point satisfies exactly the explicit scheme's equations.
  Scenario s = bt::example("5.1a");
  BoundaryTrace trace = exact_trace(s, 1e-3, 2e-2);
  VolterraSolution sol = solve_volterra_successive(trace, s, 1e-12, 50);
  Reconstruction direct = reconstruct_explicit(trace, s);
  EXPECT_LE(bt::sup_diff(sol.mass.delta, direct.delta), 1e-10);
}

TEST(Volterra, UpdateNormsDecayGeometrically) {
  Scenario s = bt::example("5.1a");
  BoundaryTrace trace = exact_trace(s, 1e-3, 2e-2);
  VolterraSolution sol = solve_volterra_successive(trace, s, 1e-12, 50);
  const auto& norms = sol.diagnostics.update_norms;
  ASSERT_GE(norms.size(), 4u);
  for (std::size_t i = 1; i + 1 < norms.size(); ++i) {
    if (norms[i + 1] == 0.0) break;  // converged to the exact fixed point
    EXPECT_LE(norms[i + 1], 0.9 * norms[i]) << "iteration " << i;
  }
}

TEST(Volterra, BudgetExhaustionCarriesHistory) {
  Scenario s = bt::example("5.1a");
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  try {
    solve_volterra_successive(trace, s, 1e-12, 1);
    FAIL() << "expected non-convergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.update_norms().size(), 1u);
    EXPECT_GT(e.update_norms().front(), 0.0);
  }
}

TEST(Volterra, TabulatedDistributionRejected) {
  Scenario s = bt::example("5.1a");
  s.distribution = InflowDistribution(TabulatedDistribution{
      {0.0}, {0.0, 5.0, 10.0}, {{0.1, 0.1, 0.1}}});
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  EXPECT_THROW(solve_volterra_successive(trace, s, 1e-10, 10), AssumptionViolation);
}

TEST(UniformRecursion, DegeneratesToVolterraBeforeEdgeArrival) {
  Scenario s = bt::example("5.1a");  // xi(8) < 10
  BoundaryTrace trace = exact_trace(s, 1e-3, 2e-2);
  VolterraSolution recursive = solve_uniform_recursion(trace, s, 1e-12, 50);
  VolterraSolution successive = solve_volterra_successive(trace, s, 1e-12, 50);
  EXPECT_LE(bt::sup_diff(recursive.mass.delta, successive.mass.delta), 1e-10);
}

TEST(UniformRecursion, LongHorizonMatchesExplicitScheme) {
  Scenario s = bt::example("5.1b");  // support edge reaches the exit
  BoundaryTrace trace = exact_trace(s, 1e-3, 2e-2);
  VolterraSolution sol = solve_uniform_recursion(trace, s, 1e-10, 100);
  Reconstruction direct = reconstruct_explicit(trace, s);
  EXPECT_GT(sol.mass.xi.back(), s.kernel_length);  // the recursion branch ran
  EXPECT_LE(bt::sup_diff(sol.mass.delta, direct.delta), 0.01);
}

TEST(UniformRecursion, TracksForwardSolverMassAtFirstOrder) {
  Scenario s = bt::example("5.1b");
  auto [forward_mass, fine_trace] = solve_characteristics(s, 1e-3);
  std::vector<double> dts = {4e-2, 2e-2, 1e-2};
  std::vector<double> errors;
  for (double dt : dts) {
    int stride = static_cast<int>(std::llround(dt / 1e-3));
    BoundaryTrace trace = subsample(fine_trace, stride);
    VolterraSolution sol = solve_uniform_recursion(trace, s, 1e-10, 100);
    double worst = 0.0;
    for (std::size_t n = 0; n < sol.mass.size(); ++n) {
      worst = std::max(worst, std::abs(sol.mass.delta[n] -
                                       forward_mass.delta[n * stride]));
    }
    errors.push_back(worst);
  }
  EXPECT_LE(errors.back(), 1e-3);  // C * dt at dt = 1e-2, across the edge arrival
  EXPECT_GE(bt::loglog_slope(dts, errors), 0.8);
}

TEST(UniformRecursion, DelayedTimeRespectsTravelTimeBound) {
  Scenario s = bt::example("5.1b");
  BoundaryTrace trace = exact_trace(s, 1e-3, 2e-2);
  VolterraSolution sol = solve_uniform_recursion(trace, s, 1e-10, 100);
  const auto& xi = sol.mass.xi;
  const auto& t = sol.mass.times;
  double vmax = s.max_speed();
  double dt = t[1] - t[0];
  for (std::size_t n = 0; n < xi.size(); ++n) {
    if (xi[n] <= s.kernel_length) continue;
    // Reconstruct the delayed time from the converged shift.
    double target = xi[n] - s.kernel_length;
    std::size_t p = 1;
    while (xi[p] < target) ++p;
    double w = (target - xi[p - 1]) / (xi[p] - xi[p - 1]);
    double eta = t[p - 1] + w * dt;
    EXPECT_GT(eta, 0.0);
    EXPECT_LE(eta, t[n] - s.kernel_length / vmax + dt);
  }
}

TEST(UniformRecursion, RequiresUniformLawAndPositiveMinSpeed) {
  Scenario gaussian = bt::example("5.2c");
  BoundaryTrace trace = exact_trace(bt::example("5.1a"), 1e-2, 1e-2);
  EXPECT_THROW(solve_uniform_recursion(trace, gaussian, 1e-10, 10),
               AssumptionViolation);

  Scenario saturated = bt::example("5.1a");
  saturated.inflow = InflowRate::constant(2.0);  // reachable density >= jam
  EXPECT_THROW(solve_uniform_recursion(trace, saturated, 1e-10, 10),
               AssumptionViolation);
}

TEST(CumulativeInflow, ZeroRatesGiveZeroTotal) {
  Scenario s = bt::empty_scenario();
  BoundaryTrace trace = exact_trace(s, 1e-2, 1e-2);
  Reconstruction rec = reconstruct_explicit(trace, s);
  std::vector<double> total = cumulative_inflow(rec);
  EXPECT_LE(bt::sup_abs(total), 1e-12);
}

TEST(CumulativeInflow, ReferenceTotalsMatchAnalyticIntegrals) {
  {
    Scenario s = bt::example("5.1a");
    Reconstruction rec = reconstruct_explicit(exact_trace(s, 1e-3, 1e-2), s);
    EXPECT_NEAR(cumulative_inflow(rec).back(), 0.15 * 8.0, 1e-2);
  }
  {
    Scenario s = bt::example("5.2a");
    Reconstruction rec = reconstruct_explicit(exact_trace(s, 1e-3, 1e-2), s);
    // integral of 0.2 (1 + sin 2 pi t) over [0, 8] is exactly 1.6.
    EXPECT_NEAR(cumulative_inflow(rec).back(), 1.6, 1e-2);
  }
}
