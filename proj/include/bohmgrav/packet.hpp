#pragma once

#include <complex>

namespace bohmgrav {

/// Free Gaussian wave packet: initial r.m.s. width sigma0, group velocity u
/// along the axis of motion, spatial dimension 1 or 3.  In 3D, positions are
/// measured along the axis through the packet center, so (x - u t) is the
/// signed distance from the center.
struct GaussianPacket {
  double sigma0;
  double u;
  double m;
  double hbar;
  int dim;

  GaussianPacket(double sigma0, double u = 0.0, double m = 1.0, double hbar = 1.0,
                 int dim = 1);

  /// hbar t / (2 m sigma0^2), the dimensionless spreading parameter.
  double tau(double t) const { return hbar * t / (2.0 * m * sigma0 * sigma0); }
};

/// sigma(t) = sigma0 sqrt(1 + tau^2).  Monotone nondecreasing; t >= 0.
double packet_width(const GaussianPacket& p, double t);

struct AmplitudePhase {
  double amplitude;  // R > 0
  double action;     // S
};

/// Polar decomposition psi = R exp(iS/hbar) of the packet.  The arctan term
/// in S carries one factor hbar/2 per spatial dimension.
AmplitudePhase packet_amplitude_phase(const GaussianPacket& p, double x, double t);

/// Q = (hbar^2 / 4 m sigma^2) (dim - d^2 / 2 sigma^2), d = x - u t.
double packet_quantum_potential(const GaussianPacket& p, double x, double t);

/// f = -dQ/dx = (hbar^2 / 4 m sigma^4) (x - u t); points away from the center.
double packet_quantum_force(const GaussianPacket& p, double x, double t);

/// Bohmian velocity dS/dx / m at (x, t).
double packet_velocity(const GaussianPacket& p, double x, double t);

/// Integrate the guidance equation dx/dt = dS/dx / m from seed x0 at t = 0.
/// Fixed-step RK4 with step <= t/1000 plus a Richardson error estimate;
/// raises NumericError with the achieved estimate if it exceeds tol.
double packet_trajectory(const GaussianPacket& p, double x0, double t,
                         double tol = 1e-9);

/// Closed form of the same flow: u t + x0 sigma(t)/sigma0 (seed given in the
/// frame where the center starts at the origin).
double packet_trajectory_closed(const GaussianPacket& p, double x0, double t);

struct ClassicalLimitCheck {
  double ratio;    // hbar t / (2 m sigma0^2)
  bool classical;  // ratio < eps
};
ClassicalLimitCheck classical_limit_check(const GaussianPacket& p, double t, double eps);

/// Non-spreading packet R0(x) exp(i E t / hbar) at fixed width; the phase is
/// space-independent, so the Bohmian momentum vanishes everywhere.
struct StationaryPacket {
  double sigma0;
  double energy;
  double m;
  double hbar;
  int dim;

  double amplitude(double x) const;
  std::complex<double> psi(double x, double t) const;
  double phase(double t) const { return energy * t; }
  double quantum_potential(double x) const;
};

StationaryPacket stationary_packet(double sigma0, double energy, double m = 1.0,
                                   double hbar = 1.0, int dim = 1);

}  // namespace bohmgrav
