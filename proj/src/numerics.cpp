#include "bohmgrav/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bohmgrav::num {

std::vector<double> derivative(std::span<const double> f, double h, int order) {
  const std::size_t n = f.size();
  if (n < 5) throw std::domain_error("derivative: need at least 5 nodes");
  std::vector<double> d(n);
  if (order == 4) {
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    d[1] = (f[2] - f[0]) / (2 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2 * h);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  }
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return d;
}

std::vector<double> second_derivative(std::span<const double> f, double h, int order) {
  const std::size_t n = f.size();
  if (n < 5) throw std::domain_error("second_derivative: need at least 5 nodes");
  const double h2 = h * h;
  std::vector<double> d(n);
  if (order == 4) {
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / (12 * h2);
    d[1] = (f[0] - 2 * f[1] + f[2]) / h2;
    d[n - 2] = (f[n - 3] - 2 * f[n - 2] + f[n - 1]) / h2;
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i - 1] - 2 * f[i] + f[i + 1]) / h2;
  }
  d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2;
  d[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / h2;
  return d;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> cum(n, 0.0);
  if (n < 5) {
    for (std::size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return cum;
  }
  const auto df = derivative(f, h, 4);
  for (std::size_t i = 1; i < n; ++i) {
    cum[i] = cum[i - 1] + 0.5 * h * (f[i - 1] + f[i]) -
             h * h / 12.0 * (df[i] - df[i - 1]);
  }
  return cum;
}

GaussHermite gauss_hermite(std::size_t n) {
  if (n == 0) throw std::domain_error("gauss_hermite: n must be positive");
  GaussHermite gh;
  gh.nodes.assign(n, 0.0);
  gh.weights.assign(n, 0.0);
  const double pi_quarter = std::pow(M_PI, -0.25);
  const std::size_t half = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    // asymptotic initial guesses, then Newton on the orthonormal recurrence
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * gh.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * gh.nodes[1];
    } else {
      z = 2.0 * z - gh.nodes[i - 2];
    }
    for (int it = 0; it < 100; ++it) {
      double p1 = pi_quarter, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::domain_error("fit_line: need two or more matched samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  return fit;
}

}  // namespace bohmgrav::num
