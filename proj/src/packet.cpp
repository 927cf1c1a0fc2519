#include "bohmgrav/packet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bohmgrav/errors.hpp"

namespace bohmgrav {

namespace {

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("packet: time must be nonnegative");
}

}  // namespace

GaussianPacket::GaussianPacket(double sigma0_, double u_, double m_, double hbar_,
                               int dim_)
    : sigma0(sigma0_), u(u_), m(m_), hbar(hbar_), dim(dim_) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
    throw std::domain_error("GaussianPacket: sigma0 must be positive");
  if (!(m > 0.0) || !(hbar > 0.0))
    throw std::domain_error("GaussianPacket: m and hbar must be positive");
  if (dim != 1 && dim != 3)
    throw std::domain_error("GaussianPacket: dim must be 1 or 3, got " +
                            std::to_string(dim));
}

double packet_width(const GaussianPacket& p, double t) {
  require_nonnegative_time(t);
  const double tau = p.tau(t);
  return p.sigma0 * std::sqrt(1.0 + tau * tau);
}

AmplitudePhase packet_amplitude_phase(const GaussianPacket& p, double x, double t) {
  require_nonnegative_time(t);
  const double sigma = packet_width(p, t);
  const double d = x - p.u * t;
  AmplitudePhase out;
  out.amplitude = std::pow(2.0 * M_PI * sigma * sigma, -0.25 * p.dim) *
                  std::exp(-d * d / (4.0 * sigma * sigma));
  // S = -(dim hbar/2) arctan(tau) + m u (x - u t/2) + hbar^2 t d^2 / (8 m sigma0^2 sigma^2)
  out.action = -0.5 * p.dim * p.hbar * std::atan(p.tau(t)) +
               p.m * p.u * (x - 0.5 * p.u * t) +
               p.hbar * p.hbar * t * d * d /
                   (8.0 * p.m * p.sigma0 * p.sigma0 * sigma * sigma);
  return out;
}

double packet_quantum_potential(const GaussianPacket& p, double x, double t) {
  require_nonnegative_time(t);
  const double sigma = packet_width(p, t);
  const double d = x - p.u * t;
  return p.hbar * p.hbar / (4.0 * p.m * sigma * sigma) *
         (p.dim - d * d / (2.0 * sigma * sigma));
}

double packet_quantum_force(const GaussianPacket& p, double x, double t) {
  require_nonnegative_time(t);
  const double sigma = packet_width(p, t);
  const double s2 = sigma * sigma;
  return p.hbar * p.hbar / (4.0 * p.m * s2 * s2) * (x - p.u * t);
}

double packet_velocity(const GaussianPacket& p, double x, double t) {
  require_nonnegative_time(t);
  const double sigma = packet_width(p, t);
  const double d = x - p.u * t;
  return p.u + p.hbar * p.hbar * t * d /
                   (4.0 * p.m * p.m * p.sigma0 * p.sigma0 * sigma * sigma);
}

namespace {

double rk4_trajectory(const GaussianPacket& p, double x0, double t, std::size_t steps) {
  const double dt = t / static_cast<double>(steps);
  double x = x0;
  double tc = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = packet_velocity(p, x, tc);
    const double k2 = packet_velocity(p, x + 0.5 * dt * k1, tc + 0.5 * dt);
    const double k3 = packet_velocity(p, x + 0.5 * dt * k2, tc + 0.5 * dt);
    const double k4 = packet_velocity(p, x + dt * k3, tc + dt);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tc += dt;
  }
  return x;
}

}  // namespace

double packet_trajectory(const GaussianPacket& p, double x0, double t, double tol) {
  require_nonnegative_time(t);
  if (t == 0.0) return x0;
  const std::size_t steps = 1000;
  const double coarse = rk4_trajectory(p, x0, t, steps);
  const double fine = rk4_trajectory(p, x0, t, 2 * steps);
  const double err = std::abs(fine - coarse) / 15.0;
  const double scale = std::max(std::abs(fine), p.sigma0);
  if (err > tol * scale) {
    throw NumericError("packet_trajectory: error estimate " + std::to_string(err) +
                       " exceeds tolerance " + std::to_string(tol * scale));
  }
  return fine + (fine - coarse) / 15.0;
}

double packet_trajectory_closed(const GaussianPacket& p, double x0, double t) {
  require_nonnegative_time(t);
  return p.u * t + x0 * packet_width(p, t) / p.sigma0;
}

ClassicalLimitCheck classical_limit_check(const GaussianPacket& p, double t,
                                          double eps) {
  require_nonnegative_time(t);
  if (!(eps > 0.0)) throw std::domain_error("classical_limit_check: eps must be positive");
  const double ratio = p.tau(t);
  return ClassicalLimitCheck{ratio, ratio < eps};
}

double StationaryPacket::amplitude(double x) const {
  return std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25 * dim) *
         std::exp(-x * x / (4.0 * sigma0 * sigma0));
}

std::complex<double> StationaryPacket::psi(double x, double t) const {
  return amplitude(x) * std::exp(std::complex<double>(0.0, energy * t / hbar));
}

double StationaryPacket::quantum_potential(double x) const {
  return hbar * hbar / (4.0 * m * sigma0 * sigma0) *
         (dim - x * x / (2.0 * sigma0 * sigma0));
}

StationaryPacket stationary_packet(double sigma0, double energy, double m, double hbar,
                                   int dim) {
  if (!(sigma0 > 0.0)) throw std::domain_error("stationary_packet: sigma0 must be positive");
  if (dim != 1 && dim != 3) throw std::domain_error("stationary_packet: dim must be 1 or 3");
  return StationaryPacket{sigma0, energy, m, hbar, dim};
}

}  // namespace bohmgrav
