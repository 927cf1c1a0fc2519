#include "bohmgrav/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bohmgrav/errors.hpp"
#include "bohmgrav/numerics.hpp"

namespace bohmgrav {

namespace {

void require_min_nodes(const RadialProfile& p, std::size_t n, const char* who) {
  if (p.size() < n)
    throw std::domain_error(std::string(who) + ": need at least " + std::to_string(n) +
                            " grid nodes");
}

void require_normalized(const RadialProfile& p, const char* who) {
  if (std::abs(p.total_norm - 1.0) > 1e-6)
    throw std::domain_error(std::string(who) + ": profile not normalized, norm = " +
                            std::to_string(p.total_norm));
}

std::vector<double> radial_laplacian(const RadialProfile& p, std::span<const double> f,
                                     int order) {
  const double h = p.spacing();
  auto lap = num::second_derivative(f, h, order);
  if (p.geometry == Geometry::radial3d) {
    const auto d1 = num::derivative(f, h, order);
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += 2.0 / p.r[i] * d1[i];
  }
  return lap;
}

}  // namespace

std::vector<double> quantum_potential_grid(const RadialProfile& p,
                                           const PhysicalScales& scales) {
  require_min_nodes(p, 5, "quantum_potential_grid");
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p.amp[i] == 0.0)
      throw std::domain_error(
          "quantum_potential_grid: amp vanishes at interior node " + std::to_string(i) +
          " (r = " + std::to_string(p.r[i]) + "), Q undefined there");
  }
  const auto lap = radial_laplacian(p, p.amp, 2);
  std::vector<double> q(p.size());
  const double c = -scales.hbar * scales.hbar / (2.0 * scales.m);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = p.amp[i] != 0.0 ? c * lap[i] / p.amp[i] : 0.0;
  }
  return q;
}

std::vector<double> quantum_force_grid(std::span<const double> q, double dr) {
  if (q.size() < 5) throw std::domain_error("quantum_force_grid: need at least 5 nodes");
  auto f = num::derivative(q, dr, 2);
  for (auto& v : f) v = -v;
  return f;
}

std::vector<double> poisson_radial(const RadialProfile& p, const PhysicalScales& scales,
                                   const PoissonOptions& opt) {
  if (p.geometry != Geometry::radial3d)
    throw std::domain_error("poisson_radial: requires radial3d geometry");
  require_min_nodes(p, 5, "poisson_radial");

  const std::size_t n = p.size();
  const double h = p.spacing();
  const double mass_factor = opt.paper_literal ? 1.0 : scales.m;

  // shell integrand 4 pi s^2 rho_m and outer integrand 4 pi s rho_m
  std::vector<double> g2(n), g1(n);
  double gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho_m = mass_factor * p.amp[i] * p.amp[i];
    g2[i] = 4.0 * M_PI * p.r[i] * p.r[i] * rho_m;
    g1[i] = 4.0 * M_PI * p.r[i] * rho_m;
    gmax = std::max(gmax, g2[i]);
  }
  if (gmax > 0.0 && g2[n - 1] > 1e-3 * gmax) {
    throw std::domain_error(
        "poisson_radial: density has not decayed by r_max (shell mass at the boundary "
        "is " +
        std::to_string(g2[n - 1] / gmax) + " of its peak); norm does not converge");
  }

  // enclosed mass, with the [0, r1] segment closed by an even-quadratic fit
  const double r1 = p.r[0], r2 = p.r[1];
  const double rho1 = mass_factor * p.amp[0] * p.amp[0];
  const double rho2 = mass_factor * p.amp[1] * p.amp[1];
  const double b = (rho2 - rho1) / (r2 * r2 - r1 * r1);
  const double a = rho1 - b * r1 * r1;
  const double m_inner = 4.0 * M_PI * (a * r1 * r1 * r1 / 3.0 + b * std::pow(r1, 5) / 5.0);

  auto menc = num::cumulative_integral(g2, h);
  auto outer = num::cumulative_integral(g1, h);
  const double outer_total = outer[n - 1];

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m_in = m_inner + menc[i];
    phi[i] = -scales.G * (m_in / p.r[i] + (outer_total - outer[i]));
  }
  return phi;
}

double mean_quantum_potential(const RadialProfile& p, const PhysicalScales& scales) {
  require_min_nodes(p, 5, "mean_quantum_potential");
  require_normalized(p, "mean_quantum_potential");
  const auto lap = radial_laplacian(p, p.amp, 2);
  std::vector<double> integrand(p.size());
  const double c = -scales.hbar * scales.hbar / (2.0 * scales.m);
  for (std::size_t i = 0; i < p.size(); ++i) integrand[i] = c * p.amp[i] * lap[i];
  return volume_integral(p, integrand);
}

double mean_quantum_potential(const GaussianPacket& p) {
  // <Q> over the packet density at t = 0; substitution x = sqrt(2) sigma y
  // turns the density into the Gauss-Hermite weight.
  const auto gh = num::gauss_hermite(64);
  const double s = p.sigma0;
  double acc = 0.0;
  if (p.dim == 1) {
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double x = std::sqrt(2.0) * s * gh.nodes[i];
      acc += gh.weights[i] * packet_quantum_potential(p, x, 0.0);
    }
    return acc / std::sqrt(M_PI);
  }
  // radial measure: <Q> = 4 pi \int_0^inf r^2 rho Q dr, even integrand
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double r = std::sqrt(2.0) * s * gh.nodes[i];
    acc += gh.weights[i] * r * r * packet_quantum_potential(p, r, 0.0);
  }
  // rho(r) = (2 pi s^2)^{-3/2} e^{-r^2/2s^2}; half the symmetric integral
  const double pref = 4.0 * M_PI * std::pow(2.0 * M_PI * s * s, -1.5) * std::sqrt(2.0) * s;
  return 0.5 * pref * acc;
}

double mean_self_gravity(const RadialProfile& p, const PhysicalScales& scales) {
  if (p.geometry != Geometry::radial3d)
    throw std::domain_error(
        "mean_self_gravity: 1D geometry unsupported (1/|x-x'| kernel diverges)");
  require_normalized(p, "mean_self_gravity");
  const auto phi = poisson_radial(p, scales);
  std::vector<double> integrand(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    integrand[i] = p.amp[i] * p.amp[i] * scales.m * phi[i];
  return volume_integral(p, integrand);
}

double mean_self_gravity(const GaussianPacket& p, const PhysicalScales& scales) {
  if (p.dim != 3)
    throw std::domain_error(
        "mean_self_gravity: 1D geometry unsupported (1/|x-x'| kernel diverges)");
  // phi(r) = -G M erf(r / (sqrt(2) sigma)) / r for the isotropic Gaussian
  const auto gh = num::gauss_hermite(64);
  const double s = p.sigma0;
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double y = gh.nodes[i];
    const double r = std::sqrt(2.0) * s * std::abs(y);
    const double phi_over_minus_gm = r > 0 ? std::erf(y >= 0 ? y : -y) / r : 0.0;
    acc += gh.weights[i] * r * r * phi_over_minus_gm;
  }
  const double pref = 4.0 * M_PI * std::pow(2.0 * M_PI * s * s, -1.5) * std::sqrt(2.0) * s;
  return -scales.G * scales.m * scales.m * 0.5 * pref * acc;
}

double pair_gravitational_energy(const RadialProfile& p, const PhysicalScales& scales) {
  return 0.5 * mean_self_gravity(p, scales);
}

double energy_functional(double sigma0, const PhysicalScales& scales) {
  if (!(sigma0 > 0.0)) throw std::domain_error("energy_functional: sigma0 must be positive");
  return scales.hbar * scales.hbar / (2.0 * scales.m * sigma0 * sigma0) -
         scales.G * scales.m * scales.m / sigma0;
}

BalanceReport critical_width(const PhysicalScales& scales) {
  BalanceReport rep;
  rep.sigma_star = scales.length_scale;  // hbar^2/(G m^3)

  // Minimize in the dimensionless width s = sigma / length_scale, where the
  // functional reduces to 1/(2 s^2) - 1/s with minimum at s = 1.
  auto f = [&](double s) {
    return energy_functional(s * scales.length_scale, scales) / scales.energy_scale;
  };
  const double s_min = num::minimize_scalar(f, 0.25, 4.0);
  rep.sigma_star_numeric = s_min * scales.length_scale;

  if (std::abs(rep.sigma_star_numeric - rep.sigma_star) > 1e-10 * rep.sigma_star) {
    throw NumericError("critical_width: numerical minimizer " +
                       std::to_string(rep.sigma_star_numeric) +
                       " disagrees with closed form " + std::to_string(rep.sigma_star));
  }
  rep.E_at_min = energy_functional(rep.sigma_star, scales);
  rep.mean_Q_at_min =
      scales.hbar * scales.hbar / (2.0 * scales.m * rep.sigma_star * rep.sigma_star);
  return rep;
}

}  // namespace bohmgrav
