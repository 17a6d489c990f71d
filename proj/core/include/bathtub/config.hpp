#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bathtub/scenario.hpp"

namespace bathtub {

/// Mesh, noise and study options carried next to the scenario in the same
/// config file.
struct RunOptions {
  double forward_dt = 1e-3;
  double forward_dx = 1e-3;
  double inverse_dt = 1e-2;
  std::optional<double> nodes_dx;  // distribution-recovery node spacing
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::vector<double> study_dts;     // convergence study steps
  std::vector<double> study_sigmas;  // noise scaling levels
};

struct ParsedConfig {
  Scenario scenario;
  RunOptions options;
};

/// Parses the key-value config dialect:
///   - top-level keys L and T,
///   - [velocity]/[inflow]/[distribution]/[initial] sections with a `kind`
///     key plus law parameters,
///   - optional [mesh]/[noise]/[study] sections for run options,
///   - '#' comments, blank lines, `key = value` pairs, comma-separated
///     numeric lists.
/// Unknown sections or keys are rejected with their location.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Canonical emission; parse(emit(parse(x))) round-trips to the identical
/// configuration (numbers are written with shortest exact formatting).
std::string emit_config(const ParsedConfig& config);

/// Applies a `section.key=value` or `key=value` override to config text.
std::string apply_override(const std::string& text, const std::string& assignment);

}  // namespace bathtub
