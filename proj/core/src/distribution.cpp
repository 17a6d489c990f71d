#include "bathtub/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "bathtub/errors.hpp"

namespace bathtub {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

struct GaussView {
  double a, b;
  double value(double x) const {
    double z = (x - b) / a;
    return std::exp(-0.5 * z * z) / (a * kSqrt2Pi);
  }
};

// Bilinear lookup on the tabulated grid; zero outside positions, clamped in t.
double table_value(const TabulatedDistribution& tab, double t, double x) {
  const auto& xs = tab.positions;
  if (x < xs.front() || x > xs.back()) return 0.0;
  std::size_t j = 1;
  if (x >= xs.back()) {
    j = xs.size() - 1;
  } else {
    j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    j = std::min(std::max<std::size_t>(j, 1), xs.size() - 1);
  }
  double wx = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  auto row_value = [&](std::size_t r) {
    return tab.values[r][j - 1] + wx * (tab.values[r][j] - tab.values[r][j - 1]);
  };
  const auto& ts = tab.times;
  if (ts.size() == 1 || t <= ts.front()) return row_value(0);
  if (t >= ts.back()) return row_value(ts.size() - 1);
  std::size_t r = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) -
                                           ts.begin());
  r = std::min(std::max<std::size_t>(r, 1), ts.size() - 1);
  double wt = (t - ts[r - 1]) / (ts[r] - ts[r - 1]);
  return row_value(r - 1) + wt * (row_value(r) - row_value(r - 1));
}

}  // namespace

InflowDistribution::InflowDistribution(UniformDistribution law) : law_(law) {
  if (!(law.length > 0.0)) {
    throw ConfigurationError("uniform distribution needs a positive length");
  }
}

InflowDistribution::InflowDistribution(GaussianDistribution law) : law_(law) {
  if (!(law.width > 0.0)) {
    throw ConfigurationError("gaussian distribution needs a positive width");
  }
}

InflowDistribution::InflowDistribution(TabulatedDistribution law) : law_(std::move(law)) {
  const auto& tab = std::get<TabulatedDistribution>(law_);
  if (tab.positions.size() < 2 || tab.times.empty() ||
      tab.values.size() != tab.times.size()) {
    throw ConfigurationError("tabulated distribution needs a times x positions grid");
  }
  for (const auto& row : tab.values) {
    if (row.size() != tab.positions.size()) {
      throw ConfigurationError("tabulated distribution rows must match the grid");
    }
  }
  for (std::size_t i = 1; i < tab.positions.size(); ++i) {
    if (!(tab.positions[i] > tab.positions[i - 1])) {
      throw ConfigurationError("tabulated distribution positions must be ascending");
    }
  }
  for (std::size_t i = 1; i < tab.times.size(); ++i) {
    if (!(tab.times[i] > tab.times[i - 1])) {
      throw ConfigurationError("tabulated distribution times must be ascending");
    }
  }
}

double InflowDistribution::operator()(double t, double x) const {
  return std::visit(
      [t, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return (x >= 0.0 && x <= law.length) ? 1.0 / law.length : 0.0;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          return GaussView{law.width, law.center0 + law.center_rate * t}.value(x);
        } else {
          return table_value(law, t, x);
        }
      },
      law_);
}

double InflowDistribution::dx(double t, double x) const {
  return std::visit(
      [this, t, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return 0.0;  // a.e.; the jump at the support edge is handled upstream
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          double b = law.center0 + law.center_rate * t;
          double a2 = law.width * law.width;
          return -((x - b) / a2) * (*this)(t, x);
        } else {
          const auto& xs = law.positions;
          if (x < xs.front() || x >= xs.back()) return 0.0;
          double h = 1e-6 * (xs.back() - xs.front());
          return (table_value(law, t, x + h) - table_value(law, t, std::max(x - h, xs.front()))) /
                 (x + h - std::max(x - h, xs.front()));
        }
      },
      law_);
}

double InflowDistribution::dt(double t, double x) const {
  return std::visit(
      [this, t, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          return -law.center_rate * dx(t, x);
        } else {
          if (law.times.size() == 1) return 0.0;
          double h = 1e-6 * (law.times.back() - law.times.front());
          return (table_value(law, t + h, x) - table_value(law, t - h, x)) / (2.0 * h);
        }
      },
      law_);
}

double InflowDistribution::dxx(double t, double x) const {
  return std::visit(
      [this, t, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, GaussianDistribution>) {
          double b = law.center0 + law.center_rate * t;
          double a2 = law.width * law.width;
          double z = x - b;
          return ((z * z - a2) / (a2 * a2)) * (*this)(t, x);
        } else {
          return 0.0;
        }
      },
      law_);
}

double InflowDistribution::dtx(double t, double x) const {
  return std::visit(
      [this, t, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, GaussianDistribution>) {
          return -law.center_rate * dxx(t, x);
        } else {
          return 0.0;
        }
      },
      law_);
}

bool InflowDistribution::twice_differentiable() const {
  return std::holds_alternative<GaussianDistribution>(law_);
}

bool InflowDistribution::time_independent() const {
  return std::visit(
      [](const auto& law) -> bool {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return true;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          return law.center_rate == 0.0;
        } else {
          return law.times.size() == 1;
        }
      },
      law_);
}

double InflowDistribution::min_at_exit(double horizon) const {
  return std::visit(
      [this, horizon](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return 1.0 / law.length;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          // b affine in t: phi(t, 0) is minimized where |b(t)| peaks, i.e.
          // at one of the endpoints.
          (void)law;
          return std::min(at_exit(0.0), at_exit(horizon));
        } else {
          double m = at_exit(0.0);
          int samples = 200;
          for (int i = 1; i <= samples; ++i) {
            m = std::min(m, at_exit(horizon * i / samples));
          }
          return m;
        }
      },
      law_);
}

double InflowDistribution::sup_value() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return 1.0 / law.length;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          return 1.0 / (law.width * kSqrt2Pi);
        } else {
          double m = 0.0;
          for (const auto& row : law.values) {
            for (double v : row) m = std::max(m, v);
          }
          return m;
        }
      },
      law_);
}

double InflowDistribution::support_end(double horizon) const {
  return std::visit(
      [horizon](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return law.length;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          double b0 = law.center0;
          double b1 = law.center0 + law.center_rate * horizon;
          return std::max(b0, b1) + 10.0 * law.width;
        } else {
          return law.positions.back();
        }
      },
      law_);
}

double InflowDistribution::mass(double t) const {
  double end = support_end(t);
  constexpr int kPoints = 10000;
  double h = end / (kPoints - 1);
  double sum = 0.5 * ((*this)(t, 0.0) + (*this)(t, end));
  for (int i = 1; i < kPoints - 1; ++i) sum += (*this)(t, i * h);
  return sum * h;
}

double InflowDistribution::mass_outside(double t, double kernel_length) const {
  return std::visit(
      [this, t, kernel_length](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, UniformDistribution>) {
          return law.length <= kernel_length
                     ? 0.0
                     : (law.length - kernel_length) / law.length;
        } else if constexpr (std::is_same_v<T, GaussianDistribution>) {
          double b = law.center0 + law.center_rate * t;
          double s = law.width * std::sqrt(2.0);
          double below = 0.5 * std::erfc(b / s);
          double above = 0.5 * std::erfc((kernel_length - b) / s);
          return below + above;
        } else {
          double total = mass(t);
          double end = std::min(kernel_length, law.positions.back());
          constexpr int kPoints = 10000;
          double h = end / (kPoints - 1);
          double inside = 0.5 * ((*this)(t, 0.0) + (*this)(t, end));
          for (int i = 1; i < kPoints - 1; ++i) inside += (*this)(t, i * h);
          inside *= h;
          return std::max(0.0, total - inside);
        }
      },
      law_);
}

}  // namespace bathtub
