#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bathtub/config.hpp"
#include "bathtub/inverse_inflow.hpp"
#include "bathtub/scenario.hpp"
#include "bathtub/series.hpp"

namespace bathtub {

/// Counter-based generator: sample i is a pure function of (seed, i), so
/// noise vectors are reproducible across platforms and parallel runs.
/// Algorithm: splitmix64 finalizer over seed + (i + 1) * golden-gamma.
struct CounterRng {
  std::uint64_t seed = 0;

  static constexpr const char* algorithm = "splitmix64-v1";

  std::uint64_t word(std::uint64_t index) const;
  /// Uniform on [-1, 1).
  double uniform_pm1(std::uint64_t index) const;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Independently perturbs each sample by sigma * U[-1, 1); the input stays
/// untouched and the output records the noise metadata.
BoundaryTrace add_noise(const BoundaryTrace& trace, const NoiseSpec& spec);

struct ErrorMetrics {
  double sup = 0.0;
  double l2_rel = 0.0;
  double deviation_std = 0.0;  // std of (recovered - truth mean)
};

/// Interval means of the truth on the reconstruction mesh.
std::vector<double> interval_means(const InflowRate& truth,
                                   const std::vector<double>& times);

/// Compares recovered rates against interval means of the exact rate.
ErrorMetrics f_error(const Reconstruction& rec, const InflowRate& truth);

struct RateFit {
  std::vector<double> abscissae;
  std::vector<double> errors;
  double slope = 0.0;
  double residual = 0.0;  // rms residual of the log-log fit
  std::vector<std::string> notes;
};

/// Log-log least-squares slope. Needs >= 3 strictly positive points with
/// distinct abscissae.
RateFit fit_rate(const std::vector<double>& abscissae, const std::vector<double>& errors);

/// Exact-data refinement study: one semi-analytic forward run at forward_dt
/// serves as the shared data oracle; each inverse step reconstructs on its
/// own mesh and reports the sup error against interval means. Runs fan out
/// concurrently.
RateFit convergence_study(const Scenario& scenario, const std::vector<double>& dts,
                          double forward_dt);

/// Noise study with the step tied to the noise level (dt ~ sigma^(1/2),
/// rounded to divide both the horizon and the forward mesh). Zero or
/// negative levels are skipped with a note.
RateFit noise_scaling_study(const Scenario& scenario, const std::vector<double>& sigmas,
                            std::uint64_t seed, double forward_dt);

struct ExperimentReport {
  std::string name;
  RunOptions options;
  std::string rng_algorithm;
  // Inflow-recovery metrics (empty optionals for distribution examples).
  std::optional<ErrorMetrics> exact_error;
  std::optional<ErrorMetrics> noisy_error;
  std::optional<double> cumulative_error;  // |F(T) - true F(T)|, exact data
  // Distribution-recovery metrics.
  std::optional<double> recovery_interior_sup;
  std::optional<double> recovery_noisy_interior_sup;
  std::optional<double> recovery_sup_abs;
  std::optional<double> recovery_mass;
  double runtime_seconds = 0.0;  // reported on stdout, never hashed
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> artifacts;
};

/// Names of the built-in scenarios: 5.1a, 5.1b, 5.2a, 5.2b, 5.2c, 5.4a, 5.4b.
std::vector<std::string> example_names();

/// The built-in scenario and its default run options.
ParsedConfig example_config(const std::string& name);

/// Runs the full pipeline for a built-in scenario at desk-scale meshes:
/// forward solve, trace emission, reconstruction from the emitted file
/// (exact and, when sigma > 0, noise-corrupted), error metrics, report and
/// manifest under out_dir. For the 5.4 pair the inverse step recovers the
/// inflow distribution instead.
ExperimentReport run_example(const std::string& name,
                             const std::filesystem::path& out_dir,
                             const RunOptions* override_options = nullptr);

/// Serializes the deterministic part of a report in the config dialect.
std::string report_text(const ExperimentReport& report);

}  // namespace bathtub
