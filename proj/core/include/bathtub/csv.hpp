#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bathtub/series.hpp"

namespace bathtub {

struct Reconstruction;
struct DistributionRecovery;

namespace csv {

/// Trace file: header "t,k0", one row per sample, 12 significant digits,
/// LF line endings.
void write_trace(const std::filesystem::path& path, const BoundaryTrace& trace);
BoundaryTrace read_trace(const std::filesystem::path& path);

/// Mass-curve file: header "t,delta" or "t,delta,xi".
void write_mass(const std::filesystem::path& path, const MassCurve& mass);

/// Dense field file: header "t,x,k".
void write_field(const std::filesystem::path& path, const DensityField& field);

/// Reconstruction file: header "t,xi,delta,f_hat[,f_true_mean]". The inflow
/// columns cover one fewer row than the grid; their trailing entries are
/// left blank.
void write_reconstruction(const std::filesystem::path& path, const Reconstruction& rec,
                          const std::vector<double>* truth_means = nullptr);

/// Recovery file: header "x,phi_hat[,phi_true]".
void write_recovery(const std::filesystem::path& path, const DistributionRecovery& rec,
                    const std::vector<double>* truth = nullptr);

struct FileInfo {
  std::vector<std::string> header;
  std::size_t rows = 0;
};

/// Parses the header and counts data rows; verifies every row has the same
/// column count. Throws IoError / ConfigurationError on malformed files.
FileInfo inspect(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

/// Manifest: one line per artifact, "relative-path,sha256,rows", sorted by
/// path. Paths are relative to `base`.
void write_manifest(const std::filesystem::path& manifest_path,
                    const std::filesystem::path& base,
                    const std::vector<std::filesystem::path>& files);

std::string format_value(double v);  // 12 significant digits

}  // namespace csv
}  // namespace bathtub
