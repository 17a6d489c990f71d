#include "bathtub/inflow.hpp"

#include <algorithm>
#include <cmath>

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

}  // namespace

InflowRate::InflowRate(ConstantInflow law) : law_(law) {
  if (!(law.rate >= 0.0)) {
    throw ConfigurationError("constant inflow rate must be nonnegative");
  }
}

InflowRate::InflowRate(SinusoidalInflow law) : law_(law) {
  if (law.base < std::abs(law.amplitude)) {
    throw ConfigurationError("sinusoidal inflow dips negative (|amplitude| > base)");
  }
}

InflowRate::InflowRate(TabulatedInflow law) : law_(std::move(law)) {
  const auto& t = std::get<TabulatedInflow>(law_);
  if (t.times.size() < 2 || t.times.size() != t.values.size()) {
    throw ConfigurationError("tabulated inflow needs >= 2 matching samples");
  }
  for (std::size_t i = 1; i < t.times.size(); ++i) {
    if (!(t.times[i] > t.times[i - 1])) {
      throw ConfigurationError("tabulated inflow times must be strictly ascending");
    }
  }
  for (double v : t.values) {
    if (!(v >= 0.0)) {
      throw ConfigurationError("tabulated inflow values must be nonnegative");
    }
  }
}

double InflowRate::operator()(double t) const {
  return std::visit(
      [t](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return law.rate;
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          return law.base + law.amplitude * std::sin(law.angular_frequency * t);
        } else {
          return interp_clamped(law.times, law.values, t);
        }
      },
      law_);
}

double InflowRate::integral(double t0, double t1) const {
  return std::visit(
      [this, t0, t1](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return law.rate * (t1 - t0);
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          double w = law.angular_frequency;
          if (w == 0.0) return law.base * (t1 - t0);
          return law.base * (t1 - t0) +
                 (law.amplitude / w) * (std::cos(w * t0) - std::cos(w * t1));
        } else {
          constexpr int kPoints = 100;
          double h = (t1 - t0) / (kPoints - 1);
          double sum = 0.5 * ((*this)(t0) + (*this)(t1));
          for (int i = 1; i < kPoints - 1; ++i) sum += (*this)(t0 + i * h);
          return sum * h;
        }
      },
      law_);
}

double InflowRate::sup_on(double horizon) const {
  return std::visit(
      [horizon](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return law.rate;
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          return law.base + std::abs(law.amplitude);
        } else {
          // Include every breakpoint whose segment intersects [0, horizon];
          // a piecewise-linear extremum sits at a breakpoint.
          double m = law.values.front();
          for (std::size_t i = 1; i < law.times.size(); ++i) {
            if (law.times[i - 1] < horizon) m = std::max(m, law.values[i]);
          }
          return m;
        }
      },
      law_);
}

double InflowRate::inf_on(double horizon) const {
  return std::visit(
      [this, horizon](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return law.rate;
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          if (law.angular_frequency * horizon >= 2.0 * M_PI) {
            return law.base - std::abs(law.amplitude);
          }
          // Less than a full period: check ends and the interior extremum.
          double m = std::min((*this)(0.0), (*this)(horizon));
          return std::min(m, law.base - std::abs(law.amplitude));
        } else {
          double m = law.values.front();
          for (std::size_t i = 1; i < law.times.size(); ++i) {
            if (law.times[i - 1] < horizon) m = std::min(m, law.values[i]);
          }
          return m;
        }
      },
      law_);
}

double InflowRate::slope_bound() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ConstantInflow>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SinusoidalInflow>) {
          return std::abs(law.amplitude * law.angular_frequency);
        } else {
          double s = 0.0;
          for (std::size_t i = 1; i < law.times.size(); ++i) {
            s = std::max(s, std::abs(law.values[i] - law.values[i - 1]) /
                                (law.times[i] - law.times[i - 1]));
          }
          return s;
        }
      },
      law_);
}

}  // namespace bathtub
