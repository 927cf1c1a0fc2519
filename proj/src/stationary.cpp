#include "bohmgrav/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "bohmgrav/errors.hpp"
#include "bohmgrav/fields.hpp"
#include "bohmgrav/numerics.hpp"
#include "fft.hpp"

namespace bohmgrav {

namespace {

constexpr double kWindowFloor = 1e-6;  // residual window: amp >= floor * max(amp)

PhysicalScales natural_scales() { return gravitational_scales(1.0, 1.0, 1.0); }

// Contiguous index window [first, last] with amp >= floor * max(amp),
// shrunk by `margin` nodes at each side.
std::pair<std::size_t, std::size_t> amp_window(std::span<const double> amp, double floor,
                                               std::size_t margin) {
  const double peak = *std::max_element(amp.begin(), amp.end());
  const double cut = floor * peak;
  std::size_t first = 0;
  while (first < amp.size() && amp[first] < cut) ++first;
  std::size_t last = amp.size();
  while (last > first && amp[last - 1] < cut) --last;
  if (last - first <= 2 * margin + 1)
    throw std::domain_error("amp window too small for residual evaluation");
  return {first + margin, last - 1 - margin};
}

// Laplacian of amp divided by amp through log derivatives, which keeps the
// finite differences well conditioned in exponential tails.  Valid to fourth
// order two nodes clear of the span ends.
std::vector<double> lap_over_amp(std::span<const double> amp, std::span<const double> r,
                                 double h, bool radial) {
  std::vector<double> logu(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (!(amp[i] > 0.0))
      throw std::domain_error("lap_over_amp: amplitude must be positive on the window");
    logu[i] = std::log(amp[i]);
  }
  const auto d1 = num::derivative(logu, h, 4);
  const auto d2 = num::second_derivative(logu, h, 4);
  std::vector<double> w(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    w[i] = d2[i] + d1[i] * d1[i];
    if (radial) w[i] += 2.0 / r[i] * d1[i];
  }
  return w;
}

// ---------------------------------------------------------------------------
// dimensionless Schroedinger-Newton pair (hbar = G = m = 1):
//   u''  + (2/r) u'  = 2 (phi - E) u
//   phi'' + (2/r) phi' = 4 pi u^2
// ---------------------------------------------------------------------------

struct ShotResult {
  bool nodal = false;        // u crossed zero
  bool blew_up = false;      // u exceeded the growth guard
  std::size_t last = 0;      // последний valid index written
};

struct ShotArrays {
  std::vector<double> u, du, phi, dphi;
};

// RK4 sweep over r_i = i h, i = 1..n, from the even-parity series start.
ShotResult integrate_sn(double energy, double u0, std::size_t n, double h,
                        ShotArrays* out) {
  struct State {
    double u, du, phi, dphi;
  };
  auto rhs = [energy](double r, const State& s) {
    return State{s.du, -2.0 / r * s.du + 2.0 * (s.phi - energy) * s.u, s.dphi,
                 -2.0 / r * s.dphi + 4.0 * M_PI * s.u * s.u};
  };
  const double a = (0.0 - energy) * u0 / 3.0;
  const double b = 2.0 * M_PI * u0 * u0 / 3.0;
  State s{u0 + a * h * h, 2.0 * a * h, b * h * h, 2.0 * b * h};

  if (out) {
    out->u.assign(n, 0.0);
    out->du.assign(n, 0.0);
    out->phi.assign(n, 0.0);
    out->dphi.assign(n, 0.0);
    out->u[0] = s.u;
    out->du[0] = s.du;
    out->phi[0] = s.phi;
    out->dphi[0] = s.dphi;
  }

  ShotResult res;
  const double guard = 1.5 * u0;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = h * static_cast<double>(i);
    const State k1 = rhs(r, s);
    const State s2{s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du,
                   s.phi + 0.5 * h * k1.phi, s.dphi + 0.5 * h * k1.dphi};
    const State k2 = rhs(r + 0.5 * h, s2);
    const State s3{s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du,
                   s.phi + 0.5 * h * k2.phi, s.dphi + 0.5 * h * k2.dphi};
    const State k3 = rhs(r + 0.5 * h, s3);
    const State s4{s.u + h * k3.u, s.du + h * k3.du, s.phi + h * k3.phi,
                   s.dphi + h * k3.dphi};
    const State k4 = rhs(r + h, s4);
    s.u += h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    s.du += h / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    s.phi += h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    s.dphi += h / 6.0 * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);

    if (out) {
      out->u[i] = s.u;
      out->du[i] = s.du;
      out->phi[i] = s.phi;
      out->dphi[i] = s.dphi;
    }
    res.last = i;
    if (s.u <= 0.0) {
      res.nodal = true;
      return res;
    }
    if (s.u > guard) {
      res.blew_up = true;
      return res;
    }
  }
  return res;
}

// Bisect the nodeless/one-node boundary in E at fixed central amplitude.
double bisect_energy(double u0, std::size_t n, double h, int* sweeps) {
  double e_lo = 0.0;
  if (integrate_sn(e_lo, u0, n, h, nullptr).nodal)
    throw NumericError("solve_sn_ground_state: E bracket misconfigured (node at E = 0)");
  double e_hi = 0.1;
  int gi = 0;
  while (!integrate_sn(e_hi, u0, n, h, nullptr).nodal) {
    e_hi *= 2.0;
    if (++gi > 60)
      throw NumericError("solve_sn_ground_state: bracket not found, last E = " +
                         std::to_string(e_hi));
  }
  int it = 0;
  while (e_hi - e_lo > 1e-15 * std::max(1.0, e_hi)) {
    const double mid = 0.5 * (e_lo + e_hi);
    if (integrate_sn(mid, u0, n, h, nullptr).nodal)
      e_hi = mid;
    else
      e_lo = mid;
    if (++it > 200) break;
  }
  if (sweeps) *sweeps += it + gi + 2;
  return 0.5 * (e_lo + e_hi);
}

// Replace the contaminated far tail (where the growing homogeneous mode takes
// over) by the matched exponential continuation.  Used only for the norm
// bookkeeping during the scale iteration; the final tail is rebuilt by an
// inward integration in rebuild_tail below.
void splice_tail(std::vector<double>& u, std::span<const double> du, double h) {
  const std::size_t n = u.size();
  const double u0 = u[0];
  std::size_t im = n;
  for (std::size_t i = 1; i < n; ++i) {
    if (u[i] <= 0.0 || (du[i] > 0.0 && u[i] < 0.25 * u0)) {
      im = i;
      break;
    }
  }
  if (im >= n) return;
  const std::size_t ia = im > 1 ? im - 1 : im;
  const double kappa = u[ia] > 0.0 && du[ia] < 0.0 ? -du[ia] / u[ia] : 1.0;
  for (std::size_t i = ia + 1; i < n; ++i) {
    u[i] = u[ia] * std::exp(-kappa * h * static_cast<double>(i - ia));
  }
}

// Cubic (4-point Lagrange) sample of a grid field at an off-node radius.
double interp4(std::span<const double> f, double h, double r1, double r) {
  const double s = (r - r1) / h;
  auto j = static_cast<std::ptrdiff_t>(std::floor(s));
  j = std::clamp<std::ptrdiff_t>(j, 1, static_cast<std::ptrdiff_t>(f.size()) - 3);
  const double x = s - static_cast<double>(j);
  return f[j - 1] * (-x * (x - 1.0) * (x - 2.0) / 6.0) +
         f[j] * ((x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0) +
         f[j + 1] * (-(x + 1.0) * x * (x - 2.0) / 2.0) +
         f[j + 2] * ((x + 1.0) * x * (x - 1.0) / 6.0);
}

// Two-sided sweep of the u-equation against a frozen tabulated potential:
// outward from the even-parity series start to the match node im, inward
// from r_max with a WKB start down to im.  Returns the log-derivative
// mismatch  (u'/u)_out - (u'/u)_in  at im; when `assembled` is given, fills
// it with the value-matched combination of the two branches.  Classical
// matched shooting: with the mismatch driven to zero the hand-over carries no
// derivative kink, so the pointwise residual stays at truncation level.
double two_sided_sweep(double energy, double u_center, std::span<const double> r,
                       std::span<const double> phi, double h, std::size_t im,
                       std::vector<double>* assembled) {
  const std::size_t n = r.size();
  auto phi_at = [&](double rr) { return interp4(phi, h, r[0], rr); };
  auto rhs = [&](double rr, double uu, double duu) {
    return -2.0 / rr * duu + 2.0 * (phi_at(rr) - energy) * uu;
  };
  auto rk4 = [&](double rr, double hs, double& uu, double& duu) {
    const double k1u = duu, k1d = rhs(rr, uu, duu);
    const double k2u = duu + 0.5 * hs * k1d,
                 k2d = rhs(rr + 0.5 * hs, uu + 0.5 * hs * k1u, duu + 0.5 * hs * k1d);
    const double k3u = duu + 0.5 * hs * k2d,
                 k3d = rhs(rr + 0.5 * hs, uu + 0.5 * hs * k2u, duu + 0.5 * hs * k2d);
    const double k4u = duu + hs * k3d,
                 k4d = rhs(rr + hs, uu + hs * k3u, duu + hs * k3d);
    uu += hs / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    duu += hs / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
  };

  // outward: u = uc (1 + (phi0 - E) r^2 / 6) near the origin
  const double phi0 = phi[0] - (phi[1] - phi[0]) / (r[1] * r[1] - r[0] * r[0]) * r[0] * r[0];
  const double a = (phi0 - energy) * u_center / 6.0;
  double uo = u_center + a * h * h, duo = 2.0 * a * h;
  std::vector<double> out_branch;
  if (assembled) {
    out_branch.resize(im + 1);
    out_branch[0] = uo;
  }
  for (std::size_t i = 1; i <= im; ++i) {
    rk4(r[i - 1], h, uo, duo);
    if (assembled) out_branch[i] = uo;
  }

  // inward with WKB start; overflow-guarded
  const double kap = std::sqrt(std::max(2.0 * (phi[n - 1] - energy), 1e-12));
  double ui = 1.0, dui = -kap;
  std::vector<double> in_branch;
  if (assembled) {
    in_branch.assign(n - im, 0.0);
    in_branch.back() = ui;
  }
  for (std::size_t i = n - 1; i > im; --i) {
    rk4(r[i], -h, ui, dui);
    if (assembled) in_branch[i - 1 - im] = ui;
    if (std::abs(ui) > 1e12) {
      if (assembled)
        for (auto& x : in_branch) x *= 1e-12;
      ui *= 1e-12;
      dui *= 1e-12;
    }
  }

  if (assembled) {
    assembled->assign(n, 0.0);
    for (std::size_t i = 0; i <= im; ++i) (*assembled)[i] = out_branch[i];
    const double scale = uo / ui;
    for (std::size_t i = im; i < n; ++i)
      (*assembled)[i] = in_branch[i - im] * scale;
  }
  return duo / uo - dui / ui;
}

// Polish the bisected solution: freeze phi, secant-match the eigenvalue on
// the two-sided log-derivative mismatch, reassemble u, refresh phi, repeat.
void match_polish(DimlessSolution* sol, double h) {
  const std::size_t n = sol->u.size();
  for (int pass = 0; pass < 3; ++pass) {
    const double cut = 0.2 * sol->u[0];
    std::size_t im = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (sol->u[i] < cut) {
        im = i;
        break;
      }
    }
    if (im + 8 >= n || im < 4) return;

    // central amplitude by even-quadratic extrapolation
    const double uc = sol->u[0] - (sol->u[1] - sol->u[0]) /
                                      (sol->r[1] * sol->r[1] - sol->r[0] * sol->r[0]) *
                                      sol->r[0] * sol->r[0];

    double e0 = sol->energy;
    double f0 = two_sided_sweep(e0, uc, sol->r, sol->phi, h, im, nullptr);
    double e1 = e0 - 1e-8 * std::max(1.0, std::abs(e0));
    double f1 = two_sided_sweep(e1, uc, sol->r, sol->phi, h, im, nullptr);
    for (int it = 0; it < 12 && std::abs(f1) > 1e-13; ++it) {
      if (f1 == f0) break;
      double e2 = e1 - f1 * (e1 - e0) / (f1 - f0);
      const double cap = 1e-3 * std::max(1.0, std::abs(e1));
      e2 = std::clamp(e2, e1 - cap, e1 + cap);
      e0 = e1;
      f0 = f1;
      e1 = e2;
      f1 = two_sided_sweep(e1, uc, sol->r, sol->phi, h, im, nullptr);
    }

    std::vector<double> assembled;
    two_sided_sweep(e1, uc, sol->r, sol->phi, h, im, &assembled);
    for (auto& x : assembled) x = std::max(x, 0.0);
    sol->energy = e1;
    sol->u = std::move(assembled);

    auto prof = make_profile(sol->r, sol->u, Geometry::radial3d);
    const double c = 1.0 / std::sqrt(prof.total_norm);
    for (auto& x : sol->u) x *= c;
    sol->phi = poisson_radial(make_profile(sol->r, sol->u, Geometry::radial3d),
                              natural_scales());
  }
}

struct DimlessSolution {
  std::vector<double> r, u, phi;
  double energy = 0.0;
  int iterations = 0;
};

// Gauge-fix phi(inf) = 0 via the Poisson quadrature of the final profile and
// shift the raw eigenvalue accordingly.
void fix_gauge(DimlessSolution* sol, std::span<const double> phi_raw) {
  const auto prof = make_profile(sol->r, sol->u, Geometry::radial3d);
  sol->phi = poisson_radial(prof, natural_scales());
  const auto [wa, wb] = amp_window(sol->u, 1e-3, 2);
  double shift = 0.0;
  for (std::size_t i = wa; i <= wb; ++i) shift += phi_raw[i] - sol->phi[i];
  shift /= static_cast<double>(wb - wa + 1);
  sol->energy -= shift;
}

DimlessSolution shoot_dimensionless(std::size_t n, double h) {
  DimlessSolution sol;
  sol.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.r[i] = h * static_cast<double>(i + 1);

  double u0 = 0.05;
  double energy = 0.0;
  ShotArrays arrays;
  double norm = 0.0;
  int sweeps = 0;
  bool converged = false;
  for (int pass = 0; pass < 8; ++pass) {
    energy = bisect_energy(u0, n, h, &sweeps);
    integrate_sn(energy, u0, n, h, &arrays);
    splice_tail(arrays.u, arrays.du, h);
    norm = make_profile(sol.r, arrays.u, Geometry::radial3d).total_norm;
    if (std::abs(norm - 1.0) <= 1e-11) {
      converged = true;
      break;
    }
    // exact scale symmetry: (u, phi, E) -> (l^2 u(l r), l^2 phi(l r), l^2 E)
    u0 /= norm * norm;
  }
  if (!converged && std::abs(norm - 1.0) > 1e-8)
    throw NumericError("solve_sn_ground_state: normalization iteration stalled, norm = " +
                       std::to_string(norm));

  sol.u = arrays.u;
  const double renorm = 1.0 / std::sqrt(norm);
  for (auto& v : sol.u) v *= renorm;
  sol.energy = energy;
  sol.iterations = sweeps;
  fix_gauge(&sol, arrays.phi);
  match_polish(&sol, h);
  return sol;
}

// Rayleigh quotient E = 4 pi [ (1/2) \int v'^2 dr + \int phi v^2 dr ], v = r u,
// with the [0, r1] closure (v ~ u0 r there).
double rayleigh_energy(const DimlessSolution& sol, double h) {
  const std::size_t n = sol.u.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = sol.r[i] * sol.u[i];
  const auto dv = num::derivative(v, h, 4);
  std::vector<double> kin(n), pot(n);
  for (std::size_t i = 0; i < n; ++i) {
    kin[i] = 0.5 * dv[i] * dv[i];
    pot[i] = sol.phi[i] * v[i] * v[i];
  }
  // inner closures: v' -> u(0), phi v^2 -> phi(0) u0^2 r^2
  const double kin_in = 0.5 * sol.u[0] * sol.u[0] * h;
  const double pot_in = sol.phi[0] * sol.u[0] * sol.u[0] * h * h * h / 3.0;
  return 4.0 * M_PI *
         (kin_in + pot_in + num::trapezoid(kin, h) + num::trapezoid(pot, h));
}

double hj_residual(const DimlessSolution& sol, double h) {
  const auto [wa, wb] = amp_window(sol.u, kWindowFloor, 0);
  std::vector<double> amp_s(sol.u.begin() + wa, sol.u.begin() + wb + 1);
  std::vector<double> r_s(sol.r.begin() + wa, sol.r.begin() + wb + 1);
  const auto w = lap_over_amp(amp_s, r_s, h, true);
  double worst = 0.0;
  const bool dump = std::getenv("BG_DUMP_RESIDUAL") != nullptr;
  for (std::size_t i = 4; i + 4 < w.size(); ++i) {
    const double q = -0.5 * w[i];
    const double res = std::abs(q + sol.phi[wa + i] - sol.energy);
    if (dump && res > worst)
      std::fprintf(stderr, "resid %.4f %.3e (u=%.3e)\n", r_s[i], res, amp_s[i]);
    worst = std::max(worst, res);
  }
  return worst;
}

StationarySolution finalize_physical(const DimlessSolution& sol,
                                     const PhysicalScales& scales, double h, double tol,
                                     SolverId id) {
  StationarySolution out;
  out.solver_id = id;
  out.iterations = sol.iterations;
  out.energy = sol.energy * scales.energy_scale;
  out.residual_hj = hj_residual(sol, h);

  const double length = scales.length_scale;
  std::vector<double> r_phys(sol.r.size()), amp_phys(sol.u.size()),
      phi_phys(sol.phi.size());
  const double amp_factor = std::pow(length, -1.5);
  const double phi_factor = scales.energy_scale / scales.m;
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    r_phys[i] = sol.r[i] * length;
    amp_phys[i] = sol.u[i] * amp_factor;
    phi_phys[i] = sol.phi[i] * phi_factor;
  }
  out.profile = make_profile(std::move(r_phys), std::move(amp_phys), Geometry::radial3d);
  out.phi = std::move(phi_phys);

  // dimensionless physical-mode bulk residual, for the diagnostics field
  const auto dimless_prof = make_profile(sol.r, sol.u, Geometry::radial3d);
  out.residual_eq33 = eq33_residual(dimless_prof, natural_scales(), Eq33Mode::physical);

  if (out.residual_hj > tol)
    throw NumericError("stationary solver: residual_hj = " +
                       std::to_string(out.residual_hj) + " exceeds tolerance " +
                       std::to_string(tol));
  return out;
}

void check_grid(const GridConfig& grid) {
  if (!(grid.r_max > 0.0)) throw std::domain_error("GridConfig: r_max must be positive");
  if (grid.nodes < 16) throw std::domain_error("GridConfig: need at least 16 nodes");
}

}  // namespace

StationarySolution solve_sn_ground_state(const PhysicalScales& scales,
                                         const GridConfig& grid, double tol) {
  check_grid(grid);
  if (!(tol > 0.0)) throw std::domain_error("solve_sn_ground_state: tol must be positive");
  const double rmax = grid.r_max / scales.length_scale;
  const double h = rmax / static_cast<double>(grid.nodes);
  if (rmax < 10.0)
    throw std::domain_error(
        "solve_sn_ground_state: r_max below 10 gravitational lengths cannot hold the "
        "ground state");
  if (h > 0.1)
    throw std::domain_error(
        "solve_sn_ground_state: grid resolves fewer than 10 points per unit "
        "gravitational length");
  auto sol = shoot_dimensionless(grid.nodes, h);
  return finalize_physical(sol, scales, h, tol, SolverId::shooting);
}

StationarySolution relax_sn_ground_state(const PhysicalScales& scales,
                                         const GridConfig& grid, double tol) {
  check_grid(grid);
  if (!(tol > 0.0)) throw std::domain_error("relax_sn_ground_state: tol must be positive");
  const double rmax = grid.r_max / scales.length_scale;
  const std::size_t n = grid.nodes;
  const double h = rmax / static_cast<double>(n);

  DimlessSolution sol;
  sol.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.r[i] = h * static_cast<double>(i + 1);

  // v = r u on the n-1 interior nodes; v(0) = v(rmax) = 0
  const std::size_t ni = n - 1;
  std::vector<double> v(ni);
  for (std::size_t i = 0; i < ni; ++i)
    v[i] = sol.r[i] * std::exp(-sol.r[i] * sol.r[i] / 18.0);

  Dst1 dst(ni);
  std::vector<double> vk(ni), kinetic(ni);
  for (std::size_t j = 0; j < ni; ++j) {
    const double k = M_PI * static_cast<double>(j + 1) / rmax;
    kinetic[j] = 0.5 * k * k;
  }

  auto normalize = [&](std::vector<double>& w) {
    double s = 0.0;
    for (const double x : w) s += x * x;
    const double norm = 4.0 * M_PI * h * s;
    const double c = 1.0 / std::sqrt(norm);
    for (double& x : w) x *= c;
    return norm;
  };
  normalize(v);

  auto refresh_phi = [&](const std::vector<double>& w) {
    std::vector<double> amp(n, 0.0);
    for (std::size_t i = 0; i < ni; ++i) amp[i] = std::abs(w[i]) / sol.r[i];
    amp[n - 1] = 0.0;
    const auto prof = make_profile(sol.r, amp, Geometry::radial3d);
    return poisson_radial(prof, natural_scales());
  };

  const double stages[] = {0.05, 0.01, 0.002};
  double e_prev = 0.0;
  int steps_total = 0;
  for (const double dtau : stages) {
    const double drift_tol = std::max(0.02 * tol, 1e-11);
    bool stage_done = false;
    for (int step = 0; step < 120000; ++step) {
      const auto phi = refresh_phi(v);
      for (std::size_t i = 0; i < ni; ++i) v[i] *= std::exp(-0.5 * dtau * phi[i]);
      dst.transform(v, vk);
      for (std::size_t j = 0; j < ni; ++j)
        vk[j] *= std::exp(-dtau * kinetic[j]) * dst.renorm();
      dst.transform(vk, v);
      for (std::size_t i = 0; i < ni; ++i) v[i] *= std::exp(-0.5 * dtau * phi[i]);
      const double norm = normalize(v);
      const double e_here = -0.5 * std::log(norm) / dtau;
      ++steps_total;
      if (step > 10 && std::abs(e_here - e_prev) / dtau < drift_tol) {
        e_prev = e_here;
        stage_done = true;
        break;
      }
      e_prev = e_here;
    }
    if (!stage_done)
      throw NumericError(
          "relax_sn_ground_state: eigenvalue drift stagnated above tolerance at dtau = " +
          std::to_string(dtau));
  }

  sol.u.assign(n, 0.0);
  for (std::size_t i = 0; i < ni; ++i) sol.u[i] = std::max(v[i], 0.0) / sol.r[i];
  sol.u[n - 1] = 0.0;

  auto prof = make_profile(sol.r, sol.u, Geometry::radial3d);
  const double renorm = 1.0 / std::sqrt(prof.total_norm);
  for (auto& x : sol.u) x *= renorm;
  sol.phi = poisson_radial(make_profile(sol.r, sol.u, Geometry::radial3d),
                           natural_scales());
  sol.energy = rayleigh_energy(sol, h);
  sol.iterations = steps_total;
  return finalize_physical(sol, scales, h, tol, SolverId::relaxation);
}

StationarySolution solve_eq33_literal(const PhysicalScales& scales, double rho0,
                                      const GridConfig& grid, double tol,
                                      const Eq33Options& opt) {
  check_grid(grid);
  if (!(rho0 > 0.0)) throw std::domain_error("solve_eq33_literal: rho0 must be positive");
  if (!(opt.center_curvature > 0.0))
    throw std::domain_error("solve_eq33_literal: center_curvature must be positive");

  // universal scaled form: U'' + (2/R) U' = W U, W'' + (2/R) W' = -U^2,
  // U(0) = 1, W(0) = -chi, with R = r / lstar, lstar^4 = hbar^2/(8 pi G m^2 rho0)
  const double lstar =
      std::pow(scales.hbar * scales.hbar /
                   (8.0 * M_PI * scales.G * scales.m * scales.m * rho0),
               0.25);
  const std::size_t n = grid.nodes;
  const double h = grid.r_max / static_cast<double>(n) / lstar;
  const double chi = opt.center_curvature;

  struct State {
    double u, du, w, dw;
  };
  auto rhs = [](double r, const State& s) {
    return State{s.du, -2.0 / r * s.du + s.w * s.u, s.dw, -2.0 / r * s.dw - s.u * s.u};
  };
  const double a = -chi / 6.0;
  const double b = -1.0 / 6.0;
  State s{1.0 + a * h * h, 2.0 * a * h, -chi + b * h * h, 2.0 * b * h};

  std::vector<double> r_phys(n), amp(n, 0.0);
  const double sqrt_rho0 = std::sqrt(rho0);
  bool crossed = false;
  amp[0] = sqrt_rho0 * s.u;
  r_phys[0] = h * lstar;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = h * static_cast<double>(i);
    r_phys[i] = (r + h) * lstar;
    if (crossed) continue;
    const State k1 = rhs(r, s);
    const State s2{s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du, s.w + 0.5 * h * k1.w,
                   s.dw + 0.5 * h * k1.dw};
    const State k2 = rhs(r + 0.5 * h, s2);
    const State s3{s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du, s.w + 0.5 * h * k2.w,
                   s.dw + 0.5 * h * k2.dw};
    const State k3 = rhs(r + 0.5 * h, s3);
    const State s4{s.u + h * k3.u, s.du + h * k3.du, s.w + h * k3.w, s.dw + h * k3.dw};
    const State k4 = rhs(r + h, s4);
    s.u += h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    s.du += h / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    s.w += h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w);
    s.dw += h / 6.0 * (k1.dw + 2 * k2.dw + 2 * k3.dw + k4.dw);
    if (s.u <= 0.0) {
      crossed = true;
      continue;
    }
    amp[i] = sqrt_rho0 * s.u;
  }
  if (!crossed) {
    throw std::domain_error(
        "solve_eq33_literal: density has not decayed by r_max; enlarge r_max or raise "
        "rho0 (bulk radius exceeds the grid)");
  }

  StationarySolution out;
  out.solver_id = SolverId::shooting;
  out.iterations = 1;
  out.energy = std::numeric_limits<double>::quiet_NaN();
  out.profile = make_profile(std::move(r_phys), std::move(amp), Geometry::radial3d);
  out.phi = poisson_radial(out.profile, scales);
  out.residual_eq33 = eq33_residual(out.profile, scales, Eq33Mode::literal);
  out.residual_hj = out.residual_eq33;
  if (out.residual_eq33 > tol)
    throw NumericError("solve_eq33_literal: residual " + std::to_string(out.residual_eq33) +
                       " exceeds tolerance " + std::to_string(tol));
  return out;
}

double eq33_residual(const RadialProfile& p, const PhysicalScales& scales, Eq33Mode mode,
                     double floor_frac) {
  if (p.size() < 9) throw std::domain_error("eq33_residual: need at least 9 grid nodes");
  const double h = p.spacing();
  const auto [wa, wb] = amp_window(p.amp, floor_frac, 0);
  if (wb - wa + 1 < 9) throw std::domain_error("eq33_residual: window under 9 nodes");

  std::vector<double> amp_s(p.amp.begin() + wa, p.amp.begin() + wb + 1);
  std::vector<double> r_s(p.r.begin() + wa, p.r.begin() + wb + 1);
  const bool radial = p.geometry == Geometry::radial3d;
  auto w = lap_over_amp(amp_s, r_s, h, radial);

  const double hbar2 = scales.hbar * scales.hbar;
  double scale_in, scale_out;
  if (mode == Eq33Mode::literal) {
    scale_in = 1.0;  // w itself
    scale_out = hbar2 / (2.0 * scales.m * scales.m);
  } else {
    scale_in = -hbar2 / (2.0 * scales.m);  // Q = -(hbar^2/2m) w
    scale_out = 1.0;
  }
  for (auto& x : w) x *= scale_in;

  const auto dw1 = num::derivative(w, h, 4);
  const auto dw2 = num::second_derivative(w, h, 4);
  double worst = 0.0;
  for (std::size_t i = 4; i + 4 < w.size(); ++i) {
    double lap_w = dw2[i];
    if (radial) lap_w += 2.0 / r_s[i] * dw1[i];
    const double rho = amp_s[i] * amp_s[i];
    const double res =
        mode == Eq33Mode::literal
            ? scale_out * lap_w + 4.0 * M_PI * scales.G * rho
            : lap_w + 4.0 * M_PI * scales.G * scales.m * scales.m * rho;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace bohmgrav
