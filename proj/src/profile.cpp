#include "bohmgrav/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "bohmgrav/numerics.hpp"

namespace bohmgrav {

namespace {

// Even-quadratic a + b r^2 through the first two nodes; returns {a, b}.
std::pair<double, double> even_fit(const std::vector<double>& r,
                                   std::span<const double> f) {
  const double r1 = r[0], r2 = r[1];
  const double b = (f[1] - f[0]) / (r2 * r2 - r1 * r1);
  const double a = f[0] - b * r1 * r1;
  return {a, b};
}

}  // namespace

RadialProfile make_profile(std::vector<double> r, std::vector<double> amp,
                           Geometry geometry) {
  if (r.size() != amp.size())
    throw std::domain_error("make_profile: grid and amplitude sizes differ");
  if (r.size() < 2) throw std::domain_error("make_profile: need at least 2 nodes");
  const double h = r[1] - r[0];
  if (!(h > 0.0)) throw std::domain_error("make_profile: grid must be increasing");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (std::abs(r[i] - r[i - 1] - h) > 1e-9 * h)
      throw std::domain_error("make_profile: grid spacing must be uniform");
  }
  if (geometry == Geometry::radial3d && !(r[0] > 0.0))
    throw std::domain_error("make_profile: radial grid must start at r1 > 0");
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (!(amp[i] >= 0.0) || !std::isfinite(amp[i]))
      throw std::domain_error("make_profile: amp must be nonnegative and finite (node " +
                              std::to_string(i) + ")");
  }
  RadialProfile p;
  p.r = std::move(r);
  p.amp = std::move(amp);
  p.geometry = geometry;
  std::vector<double> rho(p.amp.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = p.amp[i] * p.amp[i];
  p.total_norm = volume_integral(p, rho);
  if (!std::isfinite(p.total_norm))
    throw std::domain_error("make_profile: non-finite norm");
  return p;
}

std::vector<double> uniform_grid(double first, double last, std::size_t nodes) {
  if (nodes < 2) throw std::domain_error("uniform_grid: need at least 2 nodes");
  std::vector<double> r(nodes);
  const double h = (last - first) / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) r[i] = first + h * static_cast<double>(i);
  return r;
}

double volume_integral(const RadialProfile& p, std::span<const double> f) {
  if (f.size() != p.size())
    throw std::domain_error("volume_integral: sample count mismatch");
  const double h = p.spacing();
  if (p.geometry == Geometry::line1d) return num::trapezoid(f, h);
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = 4.0 * M_PI * p.r[i] * p.r[i] * f[i];
  double inner = 0.0;
  if (f.size() >= 2) {
    const auto [a, b] = even_fit(p.r, f);
    const double r1 = p.r[0];
    inner = 4.0 * M_PI * (a * r1 * r1 * r1 / 3.0 + b * std::pow(r1, 5) / 5.0);
  }
  return inner + num::trapezoid(g, h);
}

double central_density(const RadialProfile& p) {
  std::vector<double> rho(2);
  rho[0] = p.amp[0] * p.amp[0];
  rho[1] = p.amp[1] * p.amp[1];
  const auto [a, b] = even_fit(p.r, rho);
  return a;
}

double profile_half_width(const RadialProfile& p) {
  const double target = 0.5 * central_density(p);
  double prev_r = 0.0, prev_rho = 2.0 * target;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double rho = p.amp[i] * p.amp[i];
    if (rho < target) {
      const double frac = (prev_rho - target) / (prev_rho - rho);
      return prev_r + frac * (p.r[i] - prev_r);
    }
    prev_r = p.r[i];
    prev_rho = rho;
  }
  throw std::domain_error("profile_half_width: density never falls to half center");
}

RadialProfile RadialProfile::normalized() const {
  if (!(total_norm > 0.0))
    throw std::domain_error("RadialProfile::normalized: zero norm");
  RadialProfile out = *this;
  const double scale = 1.0 / std::sqrt(total_norm);
  for (auto& a : out.amp) a *= scale;
  out.total_norm = 1.0;
  return out;
}

}  // namespace bohmgrav
