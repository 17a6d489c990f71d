#include "bathtub/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "bathtub/errors.hpp"

namespace bathtub {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
  mutable bool consumed = false;
};

// Section -> key -> entry, preserving nothing but the values; emission is
// canonical, so ordering does not need to survive parsing.
using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  std::string section;  // "" = top level
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ParseError("unterminated section header", lineno,
                         static_cast<int>(line.find('[')) + 1);
      }
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ParseError("empty section name", lineno, 1);
      doc[section];  // sections may be empty
      continue;
    }

    std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", lineno, 1);
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", lineno, 1);
    int column = static_cast<int>(line.find(key)) + 1;
    if (doc[section].count(key) != 0) {
      throw ParseError("duplicate key '" + key + "'", lineno, column);
    }
    doc[section][key] = Entry{value, lineno, column, false};
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Entry* lookup(const std::string& section, const std::string& key) const {
    auto sit = doc_.find(section);
    if (sit == doc_.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    kit->second.consumed = true;
    return &kit->second;
  }

  double number(const std::string& section, const std::string& key) const {
    const Entry* e = lookup(section, key);
    if (e == nullptr) {
      throw ConfigurationError("missing required key '" + qualified(section, key) + "'");
    }
    return to_number(*e, section, key);
  }

  double number_or(const std::string& section, const std::string& key,
                   double fallback) const {
    const Entry* e = lookup(section, key);
    return e == nullptr ? fallback : to_number(*e, section, key);
  }

  std::string text(const std::string& section, const std::string& key) const {
    const Entry* e = lookup(section, key);
    if (e == nullptr) {
      throw ConfigurationError("missing required key '" + qualified(section, key) + "'");
    }
    return e->value;
  }

  std::vector<double> list(const std::string& section, const std::string& key) const {
    const Entry* e = lookup(section, key);
    if (e == nullptr) {
      throw ConfigurationError("missing required key '" + qualified(section, key) + "'");
    }
    return to_list(*e, section, key);
  }

  std::vector<double> list_or(const std::string& section, const std::string& key) const {
    const Entry* e = lookup(section, key);
    return e == nullptr ? std::vector<double>{} : to_list(*e, section, key);
  }

  bool has(const std::string& section, const std::string& key) const {
    auto sit = doc_.find(section);
    return sit != doc_.end() && sit->second.count(key) != 0;
  }

  void reject_unconsumed() const {
    for (const auto& [section, entries] : doc_) {
      static const char* known[] = {"",      "velocity", "inflow", "distribution",
                                    "initial", "mesh",     "noise",  "study"};
      bool known_section = std::find(std::begin(known), std::end(known), section) !=
                           std::end(known);
      for (const auto& [key, entry] : entries) {
        if (!known_section) {
          throw ParseError("unknown section '" + section + "'", entry.line, 1);
        }
        if (!entry.consumed) {
          throw ParseError("unknown key '" + qualified(section, key) + "'", entry.line,
                           entry.column);
        }
      }
    }
  }

 private:
  static std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  static double to_number(const Entry& e, const std::string& section,
                          const std::string& key) {
    double out = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) {
      throw ParseError("value of '" + qualified(section, key) + "' is not a number",
                       e.line, e.column);
    }
    return out;
  }

  static std::vector<double> to_list(const Entry& e, const std::string& section,
                                     const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) {
        throw ParseError("empty element in list '" + qualified(section, key) + "'",
                         e.line, e.column);
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("bad number in list '" + qualified(section, key) + "'", e.line,
                         e.column);
      }
      out.push_back(v);
    }
    if (out.empty()) {
      throw ParseError("list '" + qualified(section, key) + "' is empty", e.line,
                       e.column);
    }
    return out;
  }

  const Document& doc_;
};

VelocityFunction read_velocity(const Reader& r) {
  std::string kind = r.text("velocity", "kind");
  if (kind == "greenshields") {
    return VelocityFunction::greenshields(r.number("velocity", "free_flow_speed"),
                                          r.number("velocity", "jam_density"));
  }
  if (kind == "constant") {
    return VelocityFunction::constant(r.number("velocity", "value"));
  }
  if (kind == "tabulated") {
    TabulatedSpeed law;
    law.densities = r.list("velocity", "densities");
    law.speeds = r.list("velocity", "speeds");
    return VelocityFunction(std::move(law));
  }
  throw ConfigurationError("velocity.kind must be greenshields, constant or tabulated");
}

InflowRate read_inflow(const Reader& r) {
  std::string kind = r.text("inflow", "kind");
  if (kind == "constant") {
    return InflowRate::constant(r.number("inflow", "rate"));
  }
  if (kind == "sinusoidal") {
    return InflowRate::sinusoidal(r.number("inflow", "base"),
                                  r.number("inflow", "amplitude"),
                                  r.number("inflow", "angular_frequency"));
  }
  if (kind == "tabulated") {
    TabulatedInflow law;
    law.times = r.list("inflow", "times");
    law.values = r.list("inflow", "values");
    return InflowRate(std::move(law));
  }
  throw ConfigurationError("inflow.kind must be constant, sinusoidal or tabulated");
}

InflowDistribution read_distribution(const Reader& r) {
  std::string kind = r.text("distribution", "kind");
  if (kind == "uniform") {
    return InflowDistribution::uniform(r.number("distribution", "length"));
  }
  if (kind == "gaussian") {
    return InflowDistribution::gaussian(r.number("distribution", "width"),
                                        r.number("distribution", "center0"),
                                        r.number_or("distribution", "center_rate", 0.0));
  }
  if (kind == "tabulated") {
    TabulatedDistribution law;
    law.times = r.list("distribution", "times");
    law.positions = r.list("distribution", "positions");
    for (std::size_t i = 0; i < law.times.size(); ++i) {
      law.values.push_back(r.list("distribution", "values_" + std::to_string(i)));
    }
    return InflowDistribution(std::move(law));
  }
  throw ConfigurationError("distribution.kind must be uniform, gaussian or tabulated");
}

InitialDensity read_initial(const Reader& r) {
  std::string kind = r.text("initial", "kind");
  if (kind == "zero") {
    return InitialDensity::zero();
  }
  if (kind == "gaussian_bump") {
    return InitialDensity::gaussian_bump(r.number("initial", "amplitude"),
                                         r.number("initial", "width"),
                                         r.number("initial", "center"));
  }
  if (kind == "tabulated") {
    TabulatedDensity law;
    law.positions = r.list("initial", "positions");
    law.values = r.list("initial", "values");
    return InitialDensity(std::move(law));
  }
  throw ConfigurationError("initial.kind must be zero, gaussian_bump or tabulated");
}

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i != 0) out += ", ";
    out += fmt(vs[i]);
  }
  return out;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  Document doc = parse_document(text);
  if (doc.empty()) {
    throw ParseError("config is empty", 1, 1);
  }
  Reader r(doc);

  double L = r.number("", "L");
  double T = r.number("", "T");

  ParsedConfig out{Scenario{read_velocity(r), L, read_inflow(r), read_distribution(r),
                            read_initial(r), T},
                   RunOptions{}};

  RunOptions& opt = out.options;
  opt.forward_dt = r.number_or("mesh", "forward_dt", opt.forward_dt);
  opt.forward_dx = r.number_or("mesh", "forward_dx", opt.forward_dx);
  opt.inverse_dt = r.number_or("mesh", "inverse_dt", opt.inverse_dt);
  if (r.has("mesh", "nodes_dx")) {
    opt.nodes_dx = r.number("mesh", "nodes_dx");
  }
  opt.sigma = r.number_or("noise", "sigma", opt.sigma);
  opt.seed = static_cast<std::uint64_t>(r.number_or("noise", "seed", 1.0));
  opt.study_dts = r.list_or("study", "dts");
  opt.study_sigmas = r.list_or("study", "sigmas");

  r.reject_unconsumed();

  if (!(out.scenario.kernel_length > 0.0)) {
    throw ConfigurationError("L must be positive");
  }
  if (!(out.scenario.horizon > 0.0)) {
    throw ConfigurationError("T must be positive");
  }
  return out;
}

ParsedConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw IoError("cannot open config file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string emit_config(const ParsedConfig& config) {
  const Scenario& s = config.scenario;
  const RunOptions& o = config.options;
  std::ostringstream out;
  out << "L = " << fmt(s.kernel_length) << "\n";
  out << "T = " << fmt(s.horizon) << "\n";

  out << "\n[velocity]\n";
  std::visit(
      [&out](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Greenshields>) {
          out << "kind = greenshields\n";
          out << "free_flow_speed = " << fmt(law.free_flow_speed) << "\n";
          out << "jam_density = " << fmt(law.jam_density) << "\n";
        } else if constexpr (std::is_same_v<T, ConstantSpeed>) {
          out << "kind = constant\n";
          out << "value = " << fmt(law.value) << "\n";
        } else {
          out << "kind = tabulated\n";
          out << "densities = " << fmt_list(law.densities) << "\n";
          out << "speeds = " << fmt_list(law.speeds) << "\n";
        }
      },
      s.velocity.law());

  out << "\n[inflow]\n";
  std::visit(
      [&out](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          out << "kind = constant\n";
          out << "rate = " << fmt(law.rate) << "\n";
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          out << "kind = sinusoidal\n";
          out << "base = " << fmt(law.base) << "\n";
          out << "amplitude = " << fmt(law.amplitude) << "\n";
          out << "angular_frequency = " << fmt(law.angular_frequency) << "\n";
        } else {
          out << "kind = tabulated\n";
          out << "times = " << fmt_list(law.times) << "\n";
          out << "values = " << fmt_list(law.values) << "\n";
        }
      },
      s.inflow.law());

  out << "\n[distribution]\n";
  std::visit(
      [&out](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          out << "kind = uniform\n";
          out << "length = " << fmt(law.length) << "\n";
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          out << "kind = gaussian\n";
          out << "width = " << fmt(law.width) << "\n";
          out << "center0 = " << fmt(law.center0) << "\n";
          out << "center_rate = " << fmt(law.center_rate) << "\n";
        } else {
          out << "kind = tabulated\n";
          out << "times = " << fmt_list(law.times) << "\n";
          out << "positions = " << fmt_list(law.positions) << "\n";
          for (std::size_t i = 0; i < law.values.size(); ++i) {
            out << "values_" << i << " = " << fmt_list(law.values[i]) << "\n";
          }
        }
      },
      s.distribution.law());

  out << "\n[initial]\n";
  std::visit(
      [&out](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          out << "kind = zero\n";
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          out << "kind = gaussian_bump\n";
          out << "amplitude = " << fmt(law.amplitude) << "\n";
          out << "width = " << fmt(law.width) << "\n";
          out << "center = " << fmt(law.center) << "\n";
        } else {
          out << "kind = tabulated\n";
          out << "positions = " << fmt_list(law.positions) << "\n";
          out << "values = " << fmt_list(law.values) << "\n";
        }
      },
      s.initial.law());

  out << "\n[mesh]\n";
  out << "forward_dt = " << fmt(o.forward_dt) << "\n";
  out << "forward_dx = " << fmt(o.forward_dx) << "\n";
  out << "inverse_dt = " << fmt(o.inverse_dt) << "\n";
  if (o.nodes_dx) {
    out << "nodes_dx = " << fmt(*o.nodes_dx) << "\n";
  }

  out << "\n[noise]\n";
  out << "sigma = " << fmt(o.sigma) << "\n";
  out << "seed = " << o.seed << "\n";

  if (!o.study_dts.empty() || !o.study_sigmas.empty()) {
    out << "\n[study]\n";
    if (!o.study_dts.empty()) out << "dts = " << fmt_list(o.study_dts) << "\n";
    if (!o.study_sigmas.empty()) {
      out << "sigmas = " << fmt_list(o.study_sigmas) << "\n";
    }
  }
  return out.str();
}

std::string apply_override(const std::string& text, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigurationError("override must look like key=value or section.key=value");
  }
  std::string path = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  std::string section;
  std::string key = path;
  std::size_t dot = path.find('.');
  if (dot != std::string::npos) {
    section = path.substr(0, dot);
    key = path.substr(dot + 1);
  }
  if (key.empty()) throw ConfigurationError("override key is empty");

  // Rewrite the first matching assignment in place, or append one.
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  std::string current;
  bool replaced = false;
  while (std::getline(in, line)) {
    std::string body = trim(line.substr(0, line.find('#')));
    if (!body.empty() && body.front() == '[' && body.back() == ']') {
      // Append into the right section before leaving it.
      if (!replaced && current == section) {
        out << key << " = " << value << "\n";
        replaced = true;
      }
      current = trim(body.substr(1, body.size() - 2));
      out << line << "\n";
      continue;
    }
    std::size_t line_eq = body.find('=');
    if (!replaced && line_eq != std::string::npos && current == section &&
        trim(body.substr(0, line_eq)) == key) {
      out << key << " = " << value << "\n";
      replaced = true;
      continue;
    }
    out << line << "\n";
  }
  if (!replaced) {
    if (current == section) {
      out << key << " = " << value << "\n";
    } else {
      out << "\n[" << section << "]\n" << key << " = " << value << "\n";
    }
  }
  return out.str();
}

}  // namespace bathtub
