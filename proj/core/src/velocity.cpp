#include "bathtub/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bathtub/errors.hpp"

namespace bathtub {

namespace {

double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

void check_table(const TabulatedSpeed& t) {
  if (t.densities.size() < 2 || t.densities.size() != t.speeds.size()) {
    throw ConfigurationError("tabulated speed law needs >= 2 matching breakpoints");
  }
  for (std::size_t i = 1; i < t.densities.size(); ++i) {
    if (!(t.densities[i] > t.densities[i - 1])) {
      throw ConfigurationError("tabulated speed breakpoints must be strictly ascending");
    }
  }
  for (double v : t.speeds) {
    if (!std::isfinite(v)) {
      throw ConfigurationError("tabulated speed values must be finite");
    }
  }
}

}  // namespace

VelocityFunction::VelocityFunction(Greenshields law) : law_(law) {
  if (!(law.free_flow_speed > 0.0) || !(law.jam_density > 0.0)) {
    throw ConfigurationError("greenshields law needs positive speed and jam density");
  }
}

VelocityFunction::VelocityFunction(ConstantSpeed law) : law_(law) {
  if (!(law.value >= 0.0)) {
    throw ConfigurationError("constant speed must be nonnegative");
  }
}

VelocityFunction::VelocityFunction(TabulatedSpeed law) : law_(std::move(law)) {
  check_table(std::get<TabulatedSpeed>(law_));
}

double VelocityFunction::operator()(double density) const {
  if (density < 0.0 || std::isnan(density)) {
    throw std::domain_error("velocity law queried at negative density");
  }
  return std::visit(
      [density](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Greenshields>) {
          return std::max(0.0, law.free_flow_speed * (1.0 - density / law.jam_density));
        } else if constexpr (std::is_same_v<T, ConstantSpeed>) {
          return law.value;
        } else {
          return interp_clamped(law.densities, law.speeds, density);
        }
      },
      law_);
}

double VelocityFunction::max_speed() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Greenshields>) {
          return law.free_flow_speed;
        } else if constexpr (std::is_same_v<T, ConstantSpeed>) {
          return law.value;
        } else {
          return *std::max_element(law.speeds.begin(), law.speeds.end());
        }
      },
      law_);
}

double VelocityFunction::lipschitz_bound() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Greenshields>) {
          return law.free_flow_speed / law.jam_density;
        } else if constexpr (std::is_same_v<T, ConstantSpeed>) {
          return 0.0;
        } else {
          double lip = 0.0;
          for (std::size_t i = 1; i < law.densities.size(); ++i) {
            double slope = std::abs(law.speeds[i] - law.speeds[i - 1]) /
                           (law.densities[i] - law.densities[i - 1]);
            lip = std::max(lip, slope);
          }
          return lip;
        }
      },
      law_);
}

double VelocityFunction::min_speed_on(double lo, double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::max(hi, lo);
  return std::visit(
      [this, lo, hi](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Greenshields>) {
          return (*this)(hi);  // non-increasing law
        } else if constexpr (std::is_same_v<T, ConstantSpeed>) {
          return law.value;
        } else {
          // Piecewise linear: extrema sit at interval ends or interior breakpoints.
          double m = std::min((*this)(lo), (*this)(hi));
          for (std::size_t i = 0; i < law.densities.size(); ++i) {
            if (law.densities[i] > lo && law.densities[i] < hi) {
              m = std::min(m, law.speeds[i]);
            }
          }
          return m;
        }
      },
      law_);
}

}  // namespace bathtub
