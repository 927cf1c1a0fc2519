#pragma once

#include <span>
#include <vector>

#include "bohmgrav/packet.hpp"
#include "bohmgrav/profile.hpp"
#include "bohmgrav/units.hpp"

namespace bohmgrav {

/// Q = -(hbar^2/2m) Lap(amp)/amp on the profile grid, central O(h^2)
/// stencils with one-sided endpoints; radial3d uses u'' + (2/r) u'.
/// amp = 0 at an interior node raises std::domain_error naming the node.
std::vector<double> quantum_potential_grid(const RadialProfile& p,
                                           const PhysicalScales& scales);

/// f = -dQ/dr by central differences (one-sided at the ends).
std::vector<double> quantum_force_grid(std::span<const double> q, double dr);

struct PoissonOptions {
  /// Source the Poisson equation with the bare probability density (the
  /// paper prints grad^2 phi = 4 pi G rho); default uses the mass density
  /// m |psi|^2.
  bool paper_literal = false;
};

/// Gravitational potential per unit mass for the profile's density:
/// grad^2 phi = 4 pi G m amp^2, gauge phi(inf) = 0, so
/// phi(r) = -G [ M(<r)/r + 4 pi \int_r^{rmax} s rho_m(s) ds ].
/// phi <= 0 and monotone increasing.  Profiles whose norm has not converged
/// by r_max raise std::domain_error.
std::vector<double> poisson_radial(const RadialProfile& p, const PhysicalScales& scales,
                                   const PoissonOptions& opt = {});

/// <Q> = \int rho Q dV, evaluated as -(hbar^2/2m) \int amp Lap(amp) dV so
/// zero-amplitude tails are harmless.  Requires |total_norm - 1| <= 1e-6.
double mean_quantum_potential(const RadialProfile& p, const PhysicalScales& scales);

/// Analytic-Gaussian overload: 64-node Gauss-Hermite quadrature of the
/// closed-form Q against the packet density at t = 0.
double mean_quantum_potential(const GaussianPacket& p);

/// <U_g> = -G m^2 \iint rho rho' / |x - x'| (paper convention, no 1/2),
/// computed as \int rho (m phi) dV with phi from poisson_radial.
/// Requires radial3d geometry (the kernel diverges in 1D) and norm 1.
double mean_self_gravity(const RadialProfile& p, const PhysicalScales& scales);

/// Analytic-Gaussian overload via the closed-form Gaussian potential
/// -G M erf(r / sqrt(2) sigma)/r under Gauss-Hermite quadrature.  3D only.
double mean_self_gravity(const GaussianPacket& p, const PhysicalScales& scales);

/// Pairwise gravitational energy with the physical 1/2 factor,
/// E_pair = (1/2) \int (m rho) phi dV; used by the virial check.
double pair_gravitational_energy(const RadialProfile& p, const PhysicalScales& scales);

/// E(sigma0) = hbar^2 / (2 m sigma0^2) - G m^2 / sigma0.
double energy_functional(double sigma0, const PhysicalScales& scales);

struct BalanceReport {
  double sigma_star;          // hbar^2/(G m^3), closed form
  double sigma_star_numeric;  // minimizer of energy_functional
  double E_at_min;
  double mean_Q_at_min;  // hbar^2/(2 m sigma_star^2) = G^2 m^5 / (2 hbar^2)
};

/// Closed-form critical width plus a numerical minimization of the energy
/// functional; the two must agree to 1e-10 relative or NumericError is raised.
BalanceReport critical_width(const PhysicalScales& scales);

}  // namespace bohmgrav
