#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bathtub/config.hpp"
#include "bathtub/csv.hpp"
#include "bathtub/errors.hpp"
#include "bathtub/experiments.hpp"
#include "bathtub/forward.hpp"
#include "bathtub/inverse_distribution.hpp"
#include "bathtub/inverse_inflow.hpp"
#include "bathtub/scenario.hpp"

namespace fs = std::filesystem;
using namespace bathtub;

namespace {

// Exit codes, documented in the README: 0 success, 1 internal, then one code
// per error category.
int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::configuration: return 2;
    case ErrorCategory::assumption_violation: return 3;
    case ErrorCategory::non_convergence: return 4;
    case ErrorCategory::io: return 5;
    case ErrorCategory::numerical: return 6;
  }
  return 1;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string trace_path;
  std::vector<std::string> overrides;
  std::optional<double> dt;
  std::optional<double> dx;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ParsedConfig load_config(const CommonArgs& args) {
  std::string text = read_file(args.config_path);
  for (const auto& assignment : args.overrides) {
    text = apply_override(text, assignment);
  }
  return parse_config_text(text);
}

BoundaryTrace load_trace(const CommonArgs& args) {
  if (args.trace_path.empty()) {
    throw ConfigurationError("this subcommand needs --trace <file>");
  }
  BoundaryTrace trace = csv::read_trace(args.trace_path);
  double sigma = args.sigma.value_or(0.0);
  if (sigma > 0.0) {
    trace = add_noise(trace, NoiseSpec{sigma, args.seed.value_or(1)});
  }
  return trace;
}

BoundaryTrace to_inverse_mesh(const BoundaryTrace& trace, double inverse_dt) {
  double fine_dt = trace.dt();
  long stride = std::lround(inverse_dt / fine_dt);
  if (stride < 1 ||
      std::abs(inverse_dt - static_cast<double>(stride) * fine_dt) > 1e-9) {
    throw ConfigurationError(
        "inverse step must be an integer multiple of the trace step");
  }
  return subsample(trace, static_cast<int>(stride));
}

int run_forward(const CommonArgs& args, bool with_field) {
  ParsedConfig config = load_config(args);
  const Scenario& s = config.scenario;
  SpaceTimeGrid grid;
  grid.dt = args.dt.value_or(config.options.forward_dt);
  grid.dx = args.dx.value_or(config.options.forward_dx);
  grid.horizon = s.horizon;
  grid.extent = s.kernel_length;

  fs::path out(args.out_dir);
  std::vector<fs::path> artifacts;

  ForwardRun run = solve_upwind_trace(s, grid);
  csv::write_trace(out / "trace.csv", run.trace);
  csv::write_mass(out / "mass.csv", run.mass);
  artifacts.push_back(out / "trace.csv");
  artifacts.push_back(out / "mass.csv");

  if (with_field) {
    DensityField field = solve_upwind(s, grid);
    csv::write_field(out / "field.csv", field);
    artifacts.push_back(out / "field.csv");
  }
  csv::write_manifest(out / "manifest.txt", out, artifacts);
  std::cout << "forward: " << run.trace.size() << " samples, final exit density "
            << csv::format_value(run.trace.values.back()) << "\n";
  return 0;
}

int run_invert_inflow(const CommonArgs& args, const std::string& method) {
  ParsedConfig config = load_config(args);
  const Scenario& s = config.scenario;
  BoundaryTrace data =
      to_inverse_mesh(load_trace(args), args.dt.value_or(config.options.inverse_dt));

  Reconstruction rec;
  if (method == "explicit") {
    rec = reconstruct_explicit(data, s);
  } else if (method == "successive") {
    VolterraSolution sol = solve_volterra_successive(data, s, 1e-10, 200);
    rec = recover_f(sol.mass, data, s, InverseMethod::successive);
    rec.diagnostics = sol.diagnostics;
  } else if (method == "uniform-recursion") {
    VolterraSolution sol = solve_uniform_recursion(data, s, 1e-10, 200);
    rec = recover_f(sol.mass, data, s, InverseMethod::uniform_recursion);
    rec.diagnostics = sol.diagnostics;
  } else {
    throw ConfigurationError("unknown method '" + method +
                             "'; use explicit, successive or uniform-recursion");
  }

  fs::path out(args.out_dir);
  csv::write_reconstruction(out / "reconstruction.csv", rec);
  csv::write_manifest(out / "manifest.txt", out, {out / "reconstruction.csv"});
  std::cout << "invert-inflow: " << rec.inflow.size() << " rate intervals ("
            << to_string(rec.method) << ")\n";
  return 0;
}

int run_invert_distribution(const CommonArgs& args) {
  ParsedConfig config = load_config(args);
  const Scenario& s = config.scenario;
  BoundaryTrace data =
      to_inverse_mesh(load_trace(args), args.dt.value_or(config.options.inverse_dt));

  double nodes_dx = args.dx.value_or(
      config.options.nodes_dx.value_or(s.max_speed() * data.dt()));
  int num_nodes = static_cast<int>(std::llround(s.max_speed() * s.horizon / nodes_dx));

  MassCurve mass = integrate_delta_xi(data, s);
  RecoveryNodes nodes = interpolate_nodes(mass, s, num_nodes);
  DistributionRecovery rec = solve_triangular(data, nodes, s);

  fs::path out(args.out_dir);
  csv::write_recovery(out / "recovery.csv", rec);
  csv::write_manifest(out / "manifest.txt", out, {out / "recovery.csv"});
  std::cout << "invert-distribution: " << rec.positions.size() << " nodes, "
            << nodes.excluded << " beyond reach\n";
  return 0;
}

int run_study(const CommonArgs& args, bool noise_study) {
  ParsedConfig config = load_config(args);
  const Scenario& s = config.scenario;
  double forward_dt = args.dt.value_or(config.options.forward_dt);

  RateFit fit;
  if (noise_study) {
    if (config.options.study_sigmas.empty()) {
      throw ConfigurationError("config needs study.sigmas for noise-scaling");
    }
    fit = noise_scaling_study(s, config.options.study_sigmas,
                              args.seed.value_or(config.options.seed), forward_dt);
  } else {
    if (config.options.study_dts.empty()) {
      throw ConfigurationError("config needs study.dts for convergence");
    }
    fit = convergence_study(s, config.options.study_dts, forward_dt);
  }

  fs::path out(args.out_dir);
  fs::create_directories(out);
  fs::path study_path = out / "study.csv";
  {
    std::ofstream file(study_path, std::ios::binary);
    file << (noise_study ? "sigma,sup_error\n" : "dt,sup_error\n");
    for (std::size_t i = 0; i < fit.abscissae.size(); ++i) {
      file << csv::format_value(fit.abscissae[i]) << ','
           << csv::format_value(fit.errors[i]) << '\n';
    }
  }
  csv::write_manifest(out / "manifest.txt", out, {study_path});
  for (const auto& note : fit.notes) std::cerr << "note: " << note << "\n";
  std::cout << (noise_study ? "noise-scaling" : "convergence") << " slope "
            << csv::format_value(fit.slope) << " (residual "
            << csv::format_value(fit.residual) << ")\n";
  return 0;
}

int run_example_cmd(const std::string& name, const CommonArgs& args) {
  std::optional<RunOptions> options;
  if (!args.overrides.empty() || args.dt || args.dx || args.sigma || args.seed) {
    std::string text = emit_config(example_config(name));
    for (const auto& assignment : args.overrides) {
      text = apply_override(text, assignment);
    }
    ParsedConfig config = parse_config_text(text);
    if (args.dt) config.options.inverse_dt = *args.dt;
    if (args.dx) config.options.nodes_dx = *args.dx;
    if (args.sigma) config.options.sigma = *args.sigma;
    if (args.seed) config.options.seed = *args.seed;
    options = config.options;
  }

  ExperimentReport report =
      run_example(name, fs::path(args.out_dir), options ? &*options : nullptr);
  std::cout << report_text(report);
  std::cout << "runtime_seconds = " << report.runtime_seconds << "\n";
  return 0;
}

int run_validate(const CommonArgs& args) {
  ParsedConfig config = load_config(args);
  ValidationReport report = validate(config.scenario);
  bool ok = true;
  for (const auto& check : report.checks) {
    std::cout << check.name << ": " << (check.passed ? "pass" : "FAIL");
    if (!check.required) std::cout << " (informational)";
    if (!check.detail.empty()) std::cout << " - " << check.detail;
    std::cout << "\n";
    if (check.required && !check.passed) ok = false;
  }
  if (!ok) {
    std::cerr << "error category: "
              << to_string(ErrorCategory::assumption_violation) << "\n";
    return exit_code(ErrorCategory::assumption_violation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network trip-flow simulator and inverse-source toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string example_name;
  std::string method = "explicit";
  bool with_field = false;

  auto add_common = [&args](CLI::App* cmd, bool needs_config) {
    auto* config_opt = cmd->add_option("--config", args.config_path, "scenario config file");
    if (needs_config) config_opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--dt", args.dt, "time step override");
    cmd->add_option("--dx", args.dx, "space / node step override");
    cmd->add_option("--sigma", args.sigma, "noise level");
    cmd->add_option("--seed", args.seed, "noise seed");
    cmd->add_option("--set", args.overrides, "config override key=value")
        ->type_size(1)
        ->allow_extra_args(false);
  };

  CLI::App* forward = app.add_subcommand("forward", "solve the transport model");
  add_common(forward, true);
  forward->add_flag("--field", with_field, "also write the dense field table");

  CLI::App* invert_inflow =
      app.add_subcommand("invert-inflow", "recover inflow rates from a trace");
  add_common(invert_inflow, true);
  invert_inflow->add_option("--trace", args.trace_path, "trace csv")->required();
  invert_inflow->add_option("--method", method,
                            "explicit | successive | uniform-recursion");

  CLI::App* invert_distribution = app.add_subcommand(
      "invert-distribution", "recover the inflow distribution from a trace");
  add_common(invert_distribution, true);
  invert_distribution->add_option("--trace", args.trace_path, "trace csv")->required();

  CLI::App* convergence =
      app.add_subcommand("convergence", "exact-data refinement study");
  add_common(convergence, true);

  CLI::App* noise_scaling =
      app.add_subcommand("noise-scaling", "noise-level scaling study");
  add_common(noise_scaling, true);

  CLI::App* example = app.add_subcommand("example", "run a built-in scenario");
  example->add_option("name", example_name, "example id")->required();
  add_common(example, false);

  CLI::App* validate_cmd = app.add_subcommand("validate", "check model preconditions");
  add_common(validate_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (forward->parsed()) return run_forward(args, with_field);
    if (invert_inflow->parsed()) return run_invert_inflow(args, method);
    if (invert_distribution->parsed()) return run_invert_distribution(args);
    if (convergence->parsed()) return run_study(args, false);
    if (noise_scaling->parsed()) return run_study(args, true);
    if (example->parsed()) return run_example_cmd(example_name, args);
    if (validate_cmd->parsed()) return run_validate(args);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error (" << to_string(e.category()) << "): " << e.what() << "\n";
    std::cerr << "update norms:";
    for (double norm : e.update_norms()) std::cerr << ' ' << norm;
    std::cerr << "\n";
    return exit_code(e.category());
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.category()) << "): " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
