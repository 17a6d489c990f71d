#include "bathtub/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "bathtub/csv.hpp"
#include "bathtub/errors.hpp"
#include "bathtub/forward.hpp"
#include "bathtub/inverse_distribution.hpp"

namespace bathtub {

std::uint64_t CounterRng::word(std::uint64_t index) const {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform_pm1(std::uint64_t index) const {
  double u = static_cast<double>(word(index) >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec) {
  if (spec.sigma < 0.0) throw ConfigurationError("noise level must be >= 0");
  BoundaryTrace out = trace;
  out.noise_level = spec.sigma;
  out.noise_seed = spec.seed;
  if (spec.sigma == 0.0) return out;
  CounterRng rng{spec.seed};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] += spec.sigma * rng.uniform_pm1(i);
  }
  return out;
}

std::vector<double> interval_means(const InflowRate& truth,
                                   const std::vector<double>& times) {
  std::vector<double> means(times.size() > 0 ? times.size() - 1 : 0);
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    means[n] = truth.interval_mean(times[n], times[n + 1]);
  }
  return means;
}

ErrorMetrics f_error(const Reconstruction& rec, const InflowRate& truth) {
  std::vector<double> means = interval_means(truth, rec.times);
  ErrorMetrics metrics;
  double sq_err = 0.0;
  double sq_truth = 0.0;
  double sum_dev = 0.0;
  for (std::size_t n = 0; n < rec.inflow.size(); ++n) {
    double dev = rec.inflow[n] - means[n];
    metrics.sup = std::max(metrics.sup, std::abs(dev));
    sq_err += dev * dev;
    sq_truth += means[n] * means[n];
    sum_dev += dev;
  }
  std::size_t count = rec.inflow.size();
  if (count > 0) {
    metrics.l2_rel = sq_truth > 0.0 ? std::sqrt(sq_err / sq_truth)
                                    : std::sqrt(sq_err / static_cast<double>(count));
    double mean_dev = sum_dev / static_cast<double>(count);
    double var = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
      double dev = rec.inflow[n] - means[n] - mean_dev;
      var += dev * dev;
    }
    metrics.deviation_std = std::sqrt(var / static_cast<double>(count));
  }
  return metrics;
}

RateFit fit_rate(const std::vector<double>& abscissae,
                 const std::vector<double>& errors) {
  if (abscissae.size() != errors.size()) {
    throw ConfigurationError("rate fit needs matching abscissa/error lists");
  }
  if (abscissae.size() < 3) {
    throw ConfigurationError("rate fit needs at least 3 points");
  }
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    if (!(abscissae[i] > 0.0) || !(errors[i] > 0.0)) {
      throw ConfigurationError("rate fit needs strictly positive data");
    }
    for (std::size_t j = i + 1; j < abscissae.size(); ++j) {
      if (abscissae[i] == abscissae[j]) {
        throw ConfigurationError("duplicate abscissa in rate fit");
      }
    }
  }

  RateFit fit;
  fit.abscissae = abscissae;
  fit.errors = errors;
  std::size_t n = abscissae.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(abscissae[i]);
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = std::log(abscissae[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = my + fit.slope * (std::log(abscissae[i]) - mx);
    double r = std::log(errors[i]) - pred;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

namespace {

int stride_for(double coarse_dt, double fine_dt) {
  double ratio = coarse_dt / fine_dt;
  int stride = static_cast<int>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - stride) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigurationError("inverse step must be an integer multiple of the forward step");
  }
  return stride;
}

}  // namespace

RateFit convergence_study(const Scenario& scenario, const std::vector<double>& dts,
                          double forward_dt) {
  if (dts.size() < 3) throw ConfigurationError("study needs >= 3 mesh sizes");
  double finest = *std::min_element(dts.begin(), dts.end());
  if (forward_dt > finest) {
    throw ConfigurationError(
        "forward oracle mesh must be at least as fine as the finest inverse mesh");
  }
  for (double dt : dts) stride_for(dt, forward_dt);  // reject early

  // The semi-analytic marcher serves as the data oracle: its trace carries
  // only quadrature-level error, so the inverse truncation dominates the fit.
  auto [oracle_mass, oracle_trace] = solve_characteristics(scenario, forward_dt);

  std::vector<double> sorted = dts;
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::future<double>> tasks;
  tasks.reserve(sorted.size());
  for (double dt : sorted) {
    tasks.push_back(
        std::async(std::launch::async, [&scenario, &oracle_trace, forward_dt, dt] {
          BoundaryTrace data = subsample(oracle_trace, stride_for(dt, forward_dt));
          Reconstruction rec = reconstruct_explicit(data, scenario);
          return f_error(rec, scenario.inflow).sup;
        }));
  }
  std::vector<double> errors;
  errors.reserve(sorted.size());
  for (auto& task : tasks) errors.push_back(task.get());
  return fit_rate(sorted, errors);
}

RateFit noise_scaling_study(const Scenario& scenario, const std::vector<double>& sigmas,
                            std::uint64_t seed, double forward_dt) {
  std::vector<std::string> notes;
  std::vector<double> levels;
  for (double sigma : sigmas) {
    if (sigma > 0.0) {
      levels.push_back(sigma);
    } else {
      std::ostringstream note;
      note << "excluding non-positive noise level " << sigma;
      notes.push_back(note.str());
    }
  }
  if (levels.size() < 3) {
    throw ConfigurationError("noise study needs >= 3 positive levels");
  }
  std::sort(levels.begin(), levels.end());

  auto [oracle_mass, oracle_trace] = solve_characteristics(scenario, forward_dt);
  std::size_t fine_steps = oracle_trace.size() - 1;

  auto stride_near = [&](double target_dt) {
    // Nearest stride that keeps the subsample landing on the final time.
    long m = std::max(1L, std::lround(target_dt / forward_dt));
    for (long probe = 0; probe < static_cast<long>(fine_steps); ++probe) {
      if (m + probe <= static_cast<long>(fine_steps) &&
          fine_steps % static_cast<std::size_t>(m + probe) == 0) {
        return static_cast<int>(m + probe);
      }
      if (m - probe >= 1 && fine_steps % static_cast<std::size_t>(m - probe) == 0) {
        return static_cast<int>(m - probe);
      }
    }
    return 1;
  };

  std::vector<std::future<double>> tasks;
  for (double sigma : levels) {
    tasks.push_back(std::async(std::launch::async, [&, sigma] {
      int stride = stride_near(std::sqrt(sigma));
      BoundaryTrace noisy = add_noise(oracle_trace, NoiseSpec{sigma, seed});
      BoundaryTrace data = subsample(noisy, stride);
      Reconstruction rec = reconstruct_explicit(data, scenario);
      return f_error(rec, scenario.inflow).sup;
    }));
  }
  std::vector<double> errors;
  for (auto& task : tasks) errors.push_back(task.get());

  RateFit fit = fit_rate(levels, errors);
  fit.notes = std::move(notes);
  return fit;
}

std::vector<std::string> example_names() {
  return {"5.1a", "5.1b", "5.2a", "5.2b", "5.2c", "5.4a", "5.4b"};
}

ParsedConfig example_config(const std::string& name) {
  const double L = 10.0;
  RunOptions opt;  // forward 1e-3, inverse 1e-2, seed 1

  auto base = [&](double horizon) {
    return Scenario{VelocityFunction::greenshields(1.0, 1.0),
                    L,
                    InflowRate::constant(0.15),
                    InflowDistribution::uniform(L),
                    InitialDensity::zero(),
                    horizon};
  };

  if (name == "5.1a" || name == "5.1b") {
    Scenario s = base(name == "5.1a" ? 8.0 : 16.0);
    opt.sigma = 1e-4;
    return {std::move(s), opt};
  }
  if (name == "5.2a" || name == "5.2b" || name == "5.2c") {
    Scenario s = base(8.0);
    s.inflow = InflowRate::sinusoidal(0.2, 0.2, 2.0 * M_PI);
    if (name == "5.2b") {
      s.initial = InitialDensity::gaussian_bump(0.1, 10.0, L / 2.0);
    }
    if (name == "5.2c") {
      // Center path L/2 + (2t - T)/4 written as affine in t.
      s.distribution = InflowDistribution::gaussian(0.4, L / 2.0 - s.horizon / 4.0, 0.5);
    }
    opt.sigma = 1e-5;
    return {std::move(s), opt};
  }
  if (name == "5.4a" || name == "5.4b") {
    Scenario s = base(name == "5.4a" ? 8.0 : 16.0);
    opt.sigma = 1e-4;
    opt.nodes_dx = 0.1;  // noise-tuned node spacing, ~10 * sigma^(1/2)
    return {std::move(s), opt};
  }

  std::string all;
  for (const auto& n : example_names()) all += (all.empty() ? "" : ", ") + n;
  throw ConfigurationError("unknown example '" + name + "'; valid names: " + all);
}

namespace {

std::string fmt_opt(double v) { return csv::format_value(v); }

double interior_sup_error(const DistributionRecovery& rec, const Scenario& s,
                          double reach) {
  double err = 0.0;
  for (std::size_t i = 0; i < rec.positions.size(); ++i) {
    double x = rec.positions[i];
    if (x < 0.1 * reach || x > 0.9 * reach) continue;
    err = std::max(err, std::abs(rec.values[i] - s.distribution(0.0, x)));
  }
  return err;
}

}  // namespace

ExperimentReport run_example(const std::string& name,
                             const std::filesystem::path& out_dir,
                             const RunOptions* override_options) {
  auto start = std::chrono::steady_clock::now();

  ParsedConfig config = example_config(name);
  if (override_options != nullptr) config.options = *override_options;
  const Scenario& s = config.scenario;
  const RunOptions& opt = config.options;

  std::filesystem::create_directories(out_dir);

  ExperimentReport report;
  report.name = name;
  report.options = opt;
  report.rng_algorithm = CounterRng::algorithm;
  report.out_dir = out_dir;

  // Forward solve and trace emission.
  SpaceTimeGrid grid;
  grid.dt = opt.forward_dt;
  grid.dx = opt.forward_dx;
  grid.horizon = s.horizon;
  grid.extent = s.kernel_length;
  ForwardRun forward = solve_upwind_trace(s, grid);

  std::filesystem::path trace_path = out_dir / "trace.csv";
  csv::write_trace(trace_path, forward.trace);
  csv::write_mass(out_dir / "mass.csv", forward.mass);
  report.artifacts.push_back(trace_path);
  report.artifacts.push_back(out_dir / "mass.csv");

  // Downstream stages consume the emitted file, exactly like a chained CLI
  // run, so single-shot and chained pipelines agree bitwise.
  BoundaryTrace from_file = csv::read_trace(trace_path);
  int stride = stride_for(opt.inverse_dt, opt.forward_dt);

  bool distribution_example = name.rfind("5.4", 0) == 0;
  if (!distribution_example) {
    BoundaryTrace exact = subsample(from_file, stride);
    Reconstruction rec = reconstruct_explicit(exact, s);
    report.exact_error = f_error(rec, s.inflow);
    std::vector<double> means = interval_means(s.inflow, rec.times);
    csv::write_reconstruction(out_dir / "reconstruction.csv", rec, &means);
    report.artifacts.push_back(out_dir / "reconstruction.csv");

    std::vector<double> cumulative = cumulative_inflow(rec);
    report.cumulative_error =
        std::abs(cumulative.back() - s.inflow.integral(0.0, s.horizon));

    if (opt.sigma > 0.0) {
      BoundaryTrace noisy_full = add_noise(from_file, NoiseSpec{opt.sigma, opt.seed});
      csv::write_trace(out_dir / "trace_noisy.csv", noisy_full);
      report.artifacts.push_back(out_dir / "trace_noisy.csv");
      Reconstruction noisy_rec = reconstruct_explicit(subsample(noisy_full, stride), s);
      report.noisy_error = f_error(noisy_rec, s.inflow);
      std::vector<double> noisy_means = interval_means(s.inflow, noisy_rec.times);
      csv::write_reconstruction(out_dir / "reconstruction_noisy.csv", noisy_rec,
                                &noisy_means);
      report.artifacts.push_back(out_dir / "reconstruction_noisy.csv");
    }
  } else {
    double nodes_dx = opt.nodes_dx.value_or(s.max_speed() * opt.inverse_dt);
    int num_nodes =
        static_cast<int>(std::llround(s.max_speed() * s.horizon / nodes_dx));

    double reach = 0.0;
    auto recover = [&](const BoundaryTrace& data) {
      MassCurve mass = integrate_delta_xi(data, s);
      reach = mass.xi.back();
      RecoveryNodes nodes = interpolate_nodes(mass, s, num_nodes);
      return solve_triangular(data, nodes, s);
    };

    BoundaryTrace exact = subsample(from_file, stride);
    DistributionRecovery rec = recover(exact);
    report.recovery_interior_sup = interior_sup_error(rec, s, reach);
    {
      double mass_sum = 0.0;
      for (double v : rec.values) mass_sum += v * rec.nodes.dx;
      report.recovery_mass = mass_sum;
    }
    std::vector<double> truth(rec.positions.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      truth[i] = s.distribution(0.0, rec.positions[i]);
    }
    csv::write_recovery(out_dir / "recovery.csv", rec, &truth);
    report.artifacts.push_back(out_dir / "recovery.csv");

    if (opt.sigma > 0.0) {
      BoundaryTrace noisy_full = add_noise(from_file, NoiseSpec{opt.sigma, opt.seed});
      csv::write_trace(out_dir / "trace_noisy.csv", noisy_full);
      report.artifacts.push_back(out_dir / "trace_noisy.csv");
      DistributionRecovery noisy_rec = recover(subsample(noisy_full, stride));
      report.recovery_noisy_interior_sup = interior_sup_error(noisy_rec, s, reach);
      double sup_abs = 0.0;
      for (double v : noisy_rec.values) sup_abs = std::max(sup_abs, std::abs(v));
      report.recovery_sup_abs = sup_abs;
      std::vector<double> noisy_truth(noisy_rec.positions.size());
      for (std::size_t i = 0; i < noisy_truth.size(); ++i) {
        noisy_truth[i] = s.distribution(0.0, noisy_rec.positions[i]);
      }
      csv::write_recovery(out_dir / "recovery_noisy.csv", noisy_rec, &noisy_truth);
      report.artifacts.push_back(out_dir / "recovery_noisy.csv");
    }
  }

  // Deterministic report, then the manifest over everything emitted.
  std::filesystem::path report_path = out_dir / "report.cfg";
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write " + report_path.string());
    out << report_text(report);
  }
  report.artifacts.push_back(report_path);
  csv::write_manifest(out_dir / "manifest.txt", out_dir, report.artifacts);

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_text(const ExperimentReport& report) {
  std::ostringstream out;
  out << "[example]\n";
  out << "name = " << report.name << "\n";
  out << "rng = " << report.rng_algorithm << "\n";
  out << "\n[mesh]\n";
  out << "forward_dt = " << fmt_opt(report.options.forward_dt) << "\n";
  out << "forward_dx = " << fmt_opt(report.options.forward_dx) << "\n";
  out << "inverse_dt = " << fmt_opt(report.options.inverse_dt) << "\n";
  if (report.options.nodes_dx) {
    out << "nodes_dx = " << fmt_opt(*report.options.nodes_dx) << "\n";
  }
  out << "\n[noise]\n";
  out << "sigma = " << fmt_opt(report.options.sigma) << "\n";
  out << "seed = " << report.options.seed << "\n";
  out << "\n[metrics]\n";
  if (report.exact_error) {
    out << "exact_sup_error = " << fmt_opt(report.exact_error->sup) << "\n";
    out << "exact_l2_rel = " << fmt_opt(report.exact_error->l2_rel) << "\n";
    out << "exact_deviation_std = " << fmt_opt(report.exact_error->deviation_std)
        << "\n";
  }
  if (report.noisy_error) {
    out << "noisy_sup_error = " << fmt_opt(report.noisy_error->sup) << "\n";
    out << "noisy_l2_rel = " << fmt_opt(report.noisy_error->l2_rel) << "\n";
    out << "noisy_deviation_std = " << fmt_opt(report.noisy_error->deviation_std)
        << "\n";
  }
  if (report.cumulative_error) {
    out << "cumulative_error = " << fmt_opt(*report.cumulative_error) << "\n";
  }
  if (report.recovery_interior_sup) {
    out << "recovery_interior_sup = " << fmt_opt(*report.recovery_interior_sup) << "\n";
  }
  if (report.recovery_noisy_interior_sup) {
    out << "recovery_noisy_interior_sup = "
        << fmt_opt(*report.recovery_noisy_interior_sup) << "\n";
  }
  if (report.recovery_sup_abs) {
    out << "recovery_sup_abs = " << fmt_opt(*report.recovery_sup_abs) << "\n";
  }
  if (report.recovery_mass) {
    out << "recovery_mass = " << fmt_opt(*report.recovery_mass) << "\n";
  }
  return out.str();
}

}  // namespace bathtub
