#include "bathtub/csv.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bathtub/errors.hpp"
#include "bathtub/inverse_distribution.hpp"
#include "bathtub/inverse_inflow.hpp"

namespace bathtub {
namespace csv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out.is_open()) {
    throw IoError("cannot open for writing: " + path.string());
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

}  // namespace

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_trace(const std::filesystem::path& path, const BoundaryTrace& trace) {
  std::ofstream out = open_out(path);
  out << "t,k0\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << format_value(trace.times[i]) << ',' << format_value(trace.values[i]) << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + path.string());
}

BoundaryTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open trace file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace file: " + path.string());
  if (line != "t,k0") {
    throw ConfigurationError("trace file " + path.string() +
                             " has unexpected header '" + line + "'");
  }
  BoundaryTrace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != 2) {
      throw ConfigurationError("trace file " + path.string() + " line " +
                               std::to_string(lineno) + ": expected 2 columns");
    }
    try {
      trace.times.push_back(std::stod(cells[0]));
      trace.values.push_back(std::stod(cells[1]));
    } catch (const std::exception&) {
      throw ConfigurationError("trace file " + path.string() + " line " +
                               std::to_string(lineno) + ": bad number");
    }
  }
  if (trace.times.size() < 2) {
    throw ConfigurationError("trace file " + path.string() + " has fewer than 2 rows");
  }
  return trace;
}

void write_mass(const std::filesystem::path& path, const MassCurve& mass) {
  std::ofstream out = open_out(path);
  bool with_xi = !mass.xi.empty();
  out << (with_xi ? "t,delta,xi\n" : "t,delta\n");
  for (std::size_t i = 0; i < mass.times.size(); ++i) {
    out << format_value(mass.times[i]) << ',' << format_value(mass.delta[i]);
    if (with_xi) out << ',' << format_value(mass.xi[i]);
    out << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + path.string());
}

void write_field(const std::filesystem::path& path, const DensityField& field) {
  std::ofstream out = open_out(path);
  out << "t,x,k\n";
  for (int n = 0; n <= field.grid.num_steps(); ++n) {
    for (int j = 0; j <= field.grid.num_cells(); ++j) {
      out << format_value(field.time_of(n)) << ',' << format_value(field.position_of(j))
          << ',' << format_value(field.at(n, j)) << '\n';
    }
  }
  if (!out.good()) throw IoError("failed writing " + path.string());
}

void write_reconstruction(const std::filesystem::path& path, const Reconstruction& rec,
                          const std::vector<double>* truth_means) {
  std::ofstream out = open_out(path);
  out << (truth_means ? "t,xi,delta,f_hat,f_true_mean\n" : "t,xi,delta,f_hat\n");
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << format_value(rec.times[i]) << ',' << format_value(rec.xi[i]) << ','
        << format_value(rec.delta[i]) << ',';
    if (i < rec.inflow.size()) out << format_value(rec.inflow[i]);
    if (truth_means) {
      out << ',';
      if (i < truth_means->size()) out << format_value((*truth_means)[i]);
    }
    out << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + path.string());
}

void write_recovery(const std::filesystem::path& path, const DistributionRecovery& rec,
                    const std::vector<double>* truth) {
  std::ofstream out = open_out(path);
  out << (truth ? "x,phi_hat,phi_true\n" : "x,phi_hat\n");
  for (std::size_t i = 0; i < rec.positions.size(); ++i) {
    out << format_value(rec.positions[i]) << ',' << format_value(rec.values[i]);
    if (truth) out << ',' << format_value((*truth)[i]);
    out << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + path.string());
}

FileInfo inspect(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigurationError("empty file: " + path.string());
  FileInfo info;
  info.header = split(line, ',');
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (split(line, ',').size() != info.header.size()) {
      throw ConfigurationError(path.string() + " line " + std::to_string(lineno) +
                               ": column count differs from header");
    }
    ++info.rows;
  }
  return info;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("cannot open file for hashing: " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256 init failed");
  }
  char buf[1 << 16];
  while (in.good()) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(got)) != 1) {
      EVP_MD_CTX_free(ctx);
      throw IoError("sha256 update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256 final failed");
  }
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& manifest_path,
                    const std::filesystem::path& base,
                    const std::vector<std::filesystem::path>& files) {
  struct Row {
    std::string rel;
    std::string hash;
    std::size_t rows;
  };
  std::vector<Row> rows;
  rows.reserve(files.size());
  for (const auto& f : files) {
    Row r;
    r.rel = std::filesystem::relative(f, base).generic_string();
    r.hash = sha256_file(f);
    r.rows = inspect(f).rows;
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rel < b.rel; });

  std::ofstream out = open_out(manifest_path);
  for (const auto& r : rows) {
    out << r.rel << ',' << r.hash << ',' << r.rows << '\n';
  }
  if (!out.good()) throw IoError("failed writing " + manifest_path.string());
}

}  // namespace csv
}  // namespace bathtub
