// Acceptance suite: one test per criterion, each printing a single
// "[CRITERION n] PASS/FAIL" line with its runtime. Criteria are asserted at
// the stated tolerances; nothing is tuned at run time.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bathtub/csv.hpp"
#include "bathtub/errors.hpp"
#include "bathtub/experiments.hpp"
#include "bathtub/forward.hpp"
#include "bathtub/inverse_distribution.hpp"
#include "bathtub/inverse_inflow.hpp"
#include "test_support.hpp"

using namespace bathtub;
namespace bt = bathtub::testing;
namespace fs = std::filesystem;

namespace {

class Criterion {
 public:
  Criterion(int id, std::string summary, double budget_seconds)
      : id_(id),
        summary_(std::move(summary)),
        budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  ~Criterion() {
    double elapsed = seconds();
    if (budget_ > 0.0) {
      EXPECT_LE(elapsed, budget_) << "criterion " << id_ << " runtime budget";
    }
    std::printf("[CRITERION %d] %s - %s (%.1f s)\n", id_,
                ::testing::Test::HasFailure() ? "FAIL" : "PASS", summary_.c_str(),
                elapsed);
    std::fflush(stdout);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  int id_;
  std::string summary_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
};

BoundaryTrace upwind_trace(const Scenario& s, double step) {
  return solve_upwind_trace(s, SpaceTimeGrid::square(step, s)).trace;
}

double sup_f_deviation(const Reconstruction& rec, double level) {
  double worst = 0.0;
  for (double f : rec.inflow) worst = std::max(worst, std::abs(f - level));
  return worst;
}

}  // namespace

TEST(Acceptance, Criterion1) {
  Criterion criterion(1, "constant-velocity analytic oracle", 10.0);

  Scenario s = bt::constant_speed_scenario(0.5, 8.0);
  auto trace_truth = [](double t) { return 0.015 * t; };
  auto mass_truth = [](double t) { return 0.15 * t - 0.5 * 0.015 * t * t / 2.0; };
  const double trace_scale = 0.12, mass_scale = 0.96;

  std::vector<double> steps = {4e-3, 2e-3, 1e-3};
  std::vector<double> upwind_errors, chars_errors;
  for (double step : steps) {
    ForwardRun up = solve_upwind_trace(s, SpaceTimeGrid::square(step, s));
    auto [chars_mass, chars_trace] = solve_characteristics(s, step);

    double up_trace = 0.0, up_mass = 0.0, ch_trace = 0.0, ch_mass = 0.0;
    for (std::size_t n = 0; n < up.trace.size(); ++n) {
      double t = up.trace.times[n];
      up_trace = std::max(up_trace, std::abs(up.trace.values[n] - trace_truth(t)));
      up_mass = std::max(up_mass, std::abs(up.mass.delta[n] - mass_truth(t)));
      ch_trace = std::max(ch_trace, std::abs(chars_trace.values[n] - trace_truth(t)));
      ch_mass = std::max(ch_mass, std::abs(chars_mass.delta[n] - mass_truth(t)));
    }
    upwind_errors.push_back(std::max(up_trace / trace_scale, up_mass / mass_scale));
    chars_errors.push_back(std::max(ch_trace / trace_scale, ch_mass / mass_scale));

    if (step == 1e-3) {
      EXPECT_LE(up_trace / trace_scale, 0.01);
      EXPECT_LE(up_mass / mass_scale, 0.01);
      EXPECT_LE(ch_trace / trace_scale, 0.01);
      EXPECT_LE(ch_mass / mass_scale, 0.01);
    }
  }
  double upwind_slope = bt::loglog_slope(steps, upwind_errors);
  double chars_slope = bt::loglog_slope(steps, chars_errors);
  EXPECT_GE(upwind_slope, 0.8);
  EXPECT_LE(upwind_slope, 1.2);
  EXPECT_GE(chars_slope, 0.8);
  EXPECT_LE(chars_slope, 1.2);
}

TEST(Acceptance, Criterion2) {
  Criterion criterion(2, "cross-solver trace equivalence", 60.0);

  Scenario s = bt::example("5.1a");
  std::vector<double> steps = {4e-3, 2e-3, 1e-3};
  std::vector<double> gaps;
  for (double step : steps) {
    ForwardRun up = solve_upwind_trace(s, SpaceTimeGrid::square(step, s));
    auto [mass, trace] = solve_characteristics(s, step);
    gaps.push_back(bt::sup_diff(up.trace.values, trace.values));
  }
  double worst = *std::max_element(gaps.begin(), gaps.end());
  if (worst <= 1e-12) {
    // The solvers agree to roundoff on this scenario; a decreasing-rate fit
    // on noise-floor numbers is meaningless, and exact agreement strictly
    // exceeds the requested first-order mutual convergence.
    std::printf("  cross-solver gaps at roundoff floor (max %.2e)\n", worst);
    SUCCEED();
  } else {
    EXPECT_GE(bt::loglog_slope(steps, gaps), 0.8);
  }
}

TEST(Acceptance, Criterion3) {
  Criterion criterion(3, "a-priori mass and sup bounds", 120.0);

  for (const auto& name : example_names()) {
    Scenario s = bt::example(name);
    double step = 1e-3;
    ForwardRun run = solve_upwind_trace(s, SpaceTimeGrid::square(step, s));
    double phi_sup = s.distribution.sup_value();
    double slack = step * (1.0 + phi_sup * (1.0 + s.inflow.slope_bound() * s.horizon) +
                           s.inflow.sup_on(s.horizon));
    double kbar_sup = s.initial.sup_value();
    double kbar_mass = s.initial_mass();
    double worst_l1 = 0.0, worst_sup = 0.0;
    for (std::size_t n = 0; n < run.trace.size(); ++n) {
      double inflow_total = s.inflow.integral(0.0, run.trace.times[n]);
      worst_l1 = std::max(worst_l1,
                          run.mass.delta[n] - (kbar_mass + inflow_total + slack));
      worst_sup = std::max(
          worst_sup, run.row_max[n] - (kbar_sup + phi_sup * inflow_total + slack));
    }
    EXPECT_LE(worst_l1, 0.0) << name;
    EXPECT_LE(worst_sup, 0.0) << name;
    EXPECT_GE(run.min_value, -1e-12) << name;
  }
}

TEST(Acceptance, Criterion4) {
  Criterion criterion(4, "round-trip inflow recovery on exact data", 120.0);

  // Richardson consistency of the desk-scale forward oracle.
  {
    Scenario s = bt::example("5.2a");
    BoundaryTrace coarse = upwind_trace(s, 1e-3);
    BoundaryTrace fine = subsample(upwind_trace(s, 5e-4), 2);
    double gap = bt::sup_diff(coarse.values, fine.values);
    std::printf("  forward Richardson gap (5.2a): %.3e\n", gap);
    EXPECT_LE(gap, 2e-3);  // first-order oracle error stays near 2 * gap
  }

  {
    Scenario s = bt::example("5.1a");
    Reconstruction rec = reconstruct_explicit(upwind_trace(s, 1e-3), s);
    EXPECT_LE(sup_f_deviation(rec, 0.15), 0.01);
  }
  {
    Scenario s = bt::example("5.2a");
    Reconstruction rec = reconstruct_explicit(upwind_trace(s, 1e-3), s);
    EXPECT_LE(f_error(rec, s.inflow).l2_rel, 0.05);
  }
}

TEST(Acceptance, Criterion5) {
  Criterion criterion(5, "discontinuous-support case stays controlled", 120.0);

  Scenario long_case = bt::example("5.1b");
  Scenario short_case = bt::example("5.1a");

  BoundaryTrace data_b = subsample(upwind_trace(long_case, 1e-3), 10);
  BoundaryTrace data_a = subsample(upwind_trace(short_case, 1e-3), 10);

  Reconstruction rec_b = reconstruct_explicit(data_b, long_case);
  Reconstruction rec_a = reconstruct_explicit(data_a, short_case);

  // Bounded across the support-edge arrival.
  EXPECT_LE(bt::sup_abs(rec_b.inflow), 1.0);

  double err_b = f_error(rec_b, long_case.inflow).sup;
  double err_a = f_error(rec_a, short_case.inflow).sup;
  std::printf("  sup errors: long %.3e vs short %.3e\n", err_b, err_a);
  // As stated: the long-horizon error within twice the short-horizon one.
  // The difference quotient carries an O(1) one-node spike where the
  // support edge arrives, while the short case is exact to roundoff.
  EXPECT_LE(err_b, 2.0 * err_a);

  // Recursion solver tracks the explicit scheme at first order.
  std::vector<double> steps = {4e-2, 2e-2, 1e-2};
  std::vector<double> gaps;
  for (double dt : steps) {
    BoundaryTrace data = subsample(upwind_trace(long_case, 1e-3),
                                   static_cast<int>(std::llround(dt / 1e-3)));
    VolterraSolution recursive = solve_uniform_recursion(data, long_case, 1e-10, 100);
    Reconstruction explicit_rec = reconstruct_explicit(data, long_case);
    gaps.push_back(bt::sup_diff(recursive.mass.delta, explicit_rec.delta));
  }
  EXPECT_GE(bt::loglog_slope(steps, gaps), 0.8);
}

TEST(Acceptance, Criterion6) {
  Criterion criterion(6, "square-root noise scaling law", 180.0);

  Scenario s = bt::example("5.1a");
  RateFit fit = noise_scaling_study(s, {1e-2, 1e-4, 1e-6}, 1, 1e-3);
  std::printf("  noise slope %.3f over errors {%.3e, %.3e, %.3e}\n", fit.slope,
              fit.errors[0], fit.errors[1], fit.errors[2]);
  EXPECT_GE(fit.slope, 0.3);
  EXPECT_LE(fit.slope, 0.7);
}

TEST(Acceptance, Criterion7) {
  Criterion criterion(7, "successive-approximation agreement on the smooth case",
                      300.0);

  Scenario s = bt::example("5.2c");
  BoundaryTrace fine = upwind_trace(s, 1e-3);

  std::vector<double> steps = {4e-2, 2e-2, 1e-2};
  std::vector<double> gaps;
  bool converged_everywhere = true;
  for (double dt : steps) {
    BoundaryTrace data = subsample(fine, static_cast<int>(std::llround(dt / 1e-3)));
    try {
      VolterraSolution sol = solve_volterra_successive(data, s, 1e-8, 60);
      const auto& norms = sol.diagnostics.update_norms;
      for (std::size_t i = 1; i + 1 < norms.size(); ++i) {
        EXPECT_LE(norms[i + 1], norms[i])
            << "update norms must decay monotonically after burn-in (dt=" << dt
            << ")";
      }
      Reconstruction explicit_rec = reconstruct_explicit(data, s);
      gaps.push_back(bt::sup_diff(sol.mass.delta, explicit_rec.delta));
    } catch (const NonConvergenceError& e) {
      converged_everywhere = false;
      double first = e.update_norms().empty() ? 0.0 : e.update_norms().front();
      double last = e.update_norms().empty() ? 0.0 : e.update_norms().back();
      ADD_FAILURE() << "successive approximations diverged at dt = " << dt
                    << " (update norms " << first << " -> " << last << " over "
                    << e.update_norms().size()
                    << " sweeps); the distribution weight at the exit is "
                    << s.distribution.min_at_exit(s.horizon)
                    << ", and the contraction constant scales with its inverse";
    }
  }
  if (converged_everywhere) {
    EXPECT_GE(bt::loglog_slope(steps, gaps), 0.8);
  }
}

TEST(Acceptance, Criterion8) {
  Criterion criterion(8, "inflow-distribution recovery", 120.0);

  Scenario s = bt::example("5.4a");
  BoundaryTrace fine = upwind_trace(s, 1e-3);

  auto recover = [](const Scenario& scenario, const BoundaryTrace& data,
                    double nodes_dx) {
    MassCurve mass = integrate_delta_xi(data, scenario);
    int num_nodes = static_cast<int>(
        std::llround(scenario.max_speed() * scenario.horizon / nodes_dx));
    RecoveryNodes nodes = interpolate_nodes(mass, scenario, num_nodes);
    return std::pair{solve_triangular(data, nodes, scenario), mass.xi.back()};
  };
  auto interior_sup = [](const DistributionRecovery& rec, double reach, double level) {
    double worst = 0.0;
    for (std::size_t j = 0; j < rec.positions.size(); ++j) {
      double x = rec.positions[j];
      if (x < 0.1 * reach || x > 0.9 * reach) continue;
      worst = std::max(worst, std::abs(rec.values[j] - level));
    }
    return worst;
  };

  // Exact data at the default node spacing tied to the trace step.
  {
    BoundaryTrace data = subsample(fine, 10);
    auto [rec, reach] = recover(s, data, s.max_speed() * 1e-2);
    EXPECT_LE(interior_sup(rec, reach, 0.1), 0.005);
  }
  // Noisy data at the sigma^(1/2)-scale node spacing (10 sqrt(sigma)).
  {
    BoundaryTrace data = subsample(add_noise(fine, NoiseSpec{1e-4, 1}), 10);
    auto [rec, reach] = recover(s, data, 0.1);
    double oscillation = interior_sup(rec, reach, 0.1);
    std::printf("  noisy oscillation amplitude: %.3e\n", oscillation);
    EXPECT_LE(oscillation, 0.02);
  }
  // Long horizon stays bounded.
  {
    Scenario long_case = bt::example("5.4b");
    BoundaryTrace noisy =
        subsample(add_noise(upwind_trace(long_case, 1e-3), NoiseSpec{1e-4, 1}), 10);
    auto [rec, reach] = recover(long_case, noisy, 0.1);
    (void)reach;
    EXPECT_LE(bt::sup_abs(rec.values), 1.0);
  }
}

TEST(Acceptance, Criterion9) {
  Criterion criterion(9, "fixed-seed reruns reproduce identical manifests", 120.0);

  fs::path dir_a = bt::scratch_dir("accept_det_a");
  fs::path dir_b = bt::scratch_dir("accept_det_b");
  for (const char* name : {"5.1a", "5.4a"}) {
    run_example(name, dir_a / name);
    run_example(name, dir_b / name);
    std::ifstream in_a(dir_a / name / "manifest.txt");
    std::ifstream in_b(dir_b / name / "manifest.txt");
    std::string manifest_a((std::istreambuf_iterator<char>(in_a)),
                           std::istreambuf_iterator<char>());
    std::string manifest_b((std::istreambuf_iterator<char>(in_b)),
                           std::istreambuf_iterator<char>());
    EXPECT_FALSE(manifest_a.empty()) << name;
    EXPECT_EQ(manifest_a, manifest_b) << name;
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
