#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace bohmgrav::num {

// --- finite-difference stencils on uniform grids -------------------------
//
// order 2: three-point central stencils, O(h^2) one-sided at the ends.
// order 4: five-point central stencils on the interior; the outermost two
//          nodes fall back to lower order and are excluded by callers that
//          need the full accuracy.

std::vector<double> derivative(std::span<const double> f, double h, int order = 2);
std::vector<double> second_derivative(std::span<const double> f, double h, int order = 2);

// --- quadrature -----------------------------------------------------------

double trapezoid(std::span<const double> f, double h);

/// Cumulative integral F(i) = \int_{x_0}^{x_i} f dx on a uniform grid.
/// Trapezoid with a derivative end-correction per interval, globally O(h^4).
std::vector<double> cumulative_integral(std::span<const double> f, double h);

/// Nodes and weights for \int f(x) e^{-x^2} dx  (physicists' Hermite).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(std::size_t n);

// --- scalar minimization ---------------------------------------------------

/// Minimize a smooth unimodal f over [a, b].  Golden-section to ~1e-8
/// relative, then Newton polish on a five-point derivative stencil so the
/// minimizer is located well below the sqrt(eps) limit of value comparison.
template <typename F>
double minimize_scalar(F&& f, double a, double b);

// --- least squares ----------------------------------------------------------

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// --- implementation ---------------------------------------------------------

template <typename F>
double minimize_scalar(F&& f, double a, double b) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > 1e-8 * (std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  double x = 0.5 * (a + b);
  // Newton on f' from a five-point stencil; three steps suffice.
  const double h = 3e-4 * (std::abs(x) > 0 ? std::abs(x) : 1.0);
  for (int it = 0; it < 4; ++it) {
    const double d1 =
        (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    if (d2 <= 0.0) break;
    x -= d1 / d2;
  }
  return x;
}

}  // namespace bohmgrav::num
