#include "bathtub/initial_density.hpp"

#include <algorithm>
#include <cmath>

#include "bathtub/errors.hpp"

namespace bathtub {

InitialDensity::InitialDensity(ZeroDensity law) : law_(law) {}

InitialDensity::InitialDensity(GaussianBump law) : law_(law) {
  if (!(law.width > 0.0) || !(law.amplitude >= 0.0)) {
    throw ConfigurationError("gaussian bump needs positive width and amplitude >= 0");
  }
}

InitialDensity::InitialDensity(TabulatedDensity law) : law_(std::move(law)) {
  const auto& tab = std::get<TabulatedDensity>(law_);
  if (tab.positions.size() < 2 || tab.positions.size() != tab.values.size()) {
    throw ConfigurationError("tabulated density needs >= 2 matching samples");
  }
  for (std::size_t i = 1; i < tab.positions.size(); ++i) {
    if (!(tab.positions[i] > tab.positions[i - 1])) {
      throw ConfigurationError("tabulated density positions must be ascending");
    }
  }
}

double InitialDensity::operator()(double x) const {
  return std::visit(
      [x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          double z = x - law.center;
          return law.amplitude * std::exp(-law.width * z * z);
        } else {
          const auto& xs = law.positions;
          if (x < xs.front() || x > xs.back()) return 0.0;
          auto it = std::upper_bound(xs.begin(), xs.end(), x);
          std::size_t i = std::min<std::size_t>(
              std::max<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1),
              xs.size() - 1);
          double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
          return law.values[i - 1] + w * (law.values[i] - law.values[i - 1]);
        }
      },
      law_);
}

double InitialDensity::derivative(double x) const {
  return std::visit(
      [this, x](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          double z = x - law.center;
          return -2.0 * law.width * z * (*this)(x);
        } else {
          const auto& xs = law.positions;
          if (x < xs.front() || x >= xs.back()) return 0.0;
          auto it = std::upper_bound(xs.begin(), xs.end(), x);
          std::size_t i = std::min<std::size_t>(
              std::max<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1),
              xs.size() - 1);
          return (law.values[i] - law.values[i - 1]) / (xs[i] - xs[i - 1]);
        }
      },
      law_);
}

double InitialDensity::mass(double kernel_length) const {
  return std::visit(
      [this, kernel_length](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          // integral over [0, inf) of A exp(-w (x-c)^2)
          double sw = std::sqrt(law.width);
          return law.amplitude * 0.5 * std::sqrt(M_PI / law.width) *
                 (1.0 + std::erf(law.center * sw));
        } else {
          double end = law.positions.back();
          double step = 1e-4 * kernel_length;
          int n = std::max(2, static_cast<int>(std::ceil(end / step)) + 1);
          double h = end / (n - 1);
          double sum = 0.5 * ((*this)(0.0) + (*this)(end));
          for (int i = 1; i < n - 1; ++i) sum += (*this)(i * h);
          return sum * h;
        }
      },
      law_);
}

double InitialDensity::sup_value() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          return law.amplitude;
        } else {
          return *std::max_element(law.values.begin(), law.values.end());
        }
      },
      law_);
}

double InitialDensity::slope_bound() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          // |d/dx A e^{-w z^2}| peaks at z = 1/sqrt(2w).
          return law.amplitude * std::sqrt(2.0 * law.width) * std::exp(-0.5);
        } else {
          double s = 0.0;
          for (std::size_t i = 1; i < law.positions.size(); ++i) {
            s = std::max(s, std::abs(law.values[i] - law.values[i - 1]) /
                                (law.positions[i] - law.positions[i - 1]));
          }
          return s;
        }
      },
      law_);
}

bool InitialDensity::supported_within(double kernel_length, double tolerance) const {
  return std::visit(
      [this, kernel_length, tolerance](const auto& law) -> bool {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, ZeroDensity>) {
          return true;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          if (law.center > kernel_length) return law.amplitude <= tolerance;
          return (*this)(kernel_length) <= tolerance;
        } else {
          for (std::size_t i = 0; i < law.positions.size(); ++i) {
            if (law.positions[i] > kernel_length && law.values[i] > tolerance) {
              return false;
            }
          }
          return true;
        }
      },
      law_);
}

bool InitialDensity::is_zero() const {
  return std::holds_alternative<ZeroDensity>(law_);
}

}  // namespace bathtub
