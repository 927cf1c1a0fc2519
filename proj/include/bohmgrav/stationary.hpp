#pragma once

#include <cstddef>

#include "bohmgrav/profile.hpp"
#include "bohmgrav/units.hpp"

namespace bohmgrav {

/// Radial grid r_i = i h, i = 1..nodes, h = r_max/nodes, in physical units.
struct GridConfig {
  double r_max = 25.0;
  std::size_t nodes = 5000;
};

enum class SolverId { shooting, relaxation };

/// Converged stationary state.  profile/energy/phi are in the caller's
/// units; the residual diagnostics are dimensionless (hbar = G = m = 1) and
/// taken over the window amp >= 1e-6 max(amp), four nodes clear of its edges.
struct StationarySolution {
  RadialProfile profile;
  double energy = 0.0;       // eigenvalue; NaN for the literal Eq.-(33) mode
  std::vector<double> phi;   // gravitational potential per unit mass, phi(inf) = 0
  double residual_hj = 0.0;  // max |Q + m phi - E| over the window
  double residual_eq33 = 0.0;
  SolverId solver_id = SolverId::shooting;
  int iterations = 0;
};

/// Nodeless ground state of the radial Schroedinger-Newton pair
///   u'' + (2/r) u' = (2m/hbar^2) (m phi - E) u,
///   phi'' + (2/r) phi' = 4 pi G m u^2,
/// normalized to 1, by outward shooting with node-count bisection on E and
/// an exact scale-symmetry iteration on the central amplitude.
StationarySolution solve_sn_ground_state(const PhysicalScales& scales,
                                         const GridConfig& grid, double tol = 1e-8);

/// Same ground state by split-step imaginary-time relaxation with per-step
/// renormalization; independent of the shooting path.  The default tolerance
/// is looser than shooting's: the converged split-step state carries an
/// O(dtau^2) Trotter deformation that enters the pointwise residual at first
/// order (the eigenvalue, being variational, is far more accurate).
StationarySolution relax_sn_ground_state(const PhysicalScales& scales,
                                         const GridConfig& grid, double tol = 1e-5);

struct Eq33Options {
  /// Central curvature of sqrt(rho) in units of the natural curvature scale:
  /// w(0) = -center_curvature * sqrt(8 pi G m^2 rho0 / hbar^2).  Any positive
  /// value is scale-covariant, so the fixed-central-density width law is
  /// unaffected; 1 gives a parabolic-top bump.
  double center_curvature = 1.0;
};

/// Solve the paper-literal stationary bulk equation
///   (hbar^2 / 2 m^2) Lap(Lap sqrt(rho) / sqrt(rho)) = -4 pi G rho
/// with fixed central density rho0 and zero slope at the origin, via the
/// second-order pair (u = sqrt(rho), w = Lap u / u).  No decaying solution
/// exists (w decreases monotonically), so the profile is the compact bump
/// truncated at its first zero; if that zero lies beyond r_max a
/// std::domain_error suggests enlarging the grid.
StationarySolution solve_eq33_literal(const PhysicalScales& scales, double rho0,
                                      const GridConfig& grid, double tol = 1e-6,
                                      const Eq33Options& opt = {});

enum class Eq33Mode { literal, physical };

/// Max-norm residual of the bulk equation over the profile, fourth-order
/// interior stencils, endpoints and the sub-floor tail excluded.
/// literal:  (hbar^2/2m^2) Lap(Lap amp / amp) + 4 pi G amp^4-free rho
/// physical: Lap Q + 4 pi G m^2 rho
double eq33_residual(const RadialProfile& p, const PhysicalScales& scales, Eq33Mode mode,
                     double floor_frac = 0.02);

}  // namespace bohmgrav
