#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bohmgrav/errors.hpp"
#include "bohmgrav/fields.hpp"
#include "bohmgrav/numerics.hpp"
#include "bohmgrav/packet.hpp"
#include "bohmgrav/profile.hpp"
#include "bohmgrav/units.hpp"

using namespace bohmgrav;

namespace {

PhysicalScales natural() { return gravitational_scales(1.0, 1.0, 1.0); }

RadialProfile gaussian_profile(double sigma, double rmax, std::size_t nodes,
                               bool normalize = true) {
  const double h = rmax / static_cast<double>(nodes);
  auto r = uniform_grid(h, rmax, nodes);
  std::vector<double> amp(nodes);
  const double pref = std::pow(2.0 * M_PI * sigma * sigma, -0.75);
  for (std::size_t i = 0; i < nodes; ++i)
    amp[i] = pref * std::exp(-r[i] * r[i] / (4.0 * sigma * sigma));
  auto p = make_profile(std::move(r), std::move(amp), Geometry::radial3d);
  return normalize ? p.normalized() : p;
}

// Narrow Gaussian shell of weight w at radius a (smooth stand-in for a delta
// shell; the exterior potential is exact by the shell theorem).
RadialProfile shell_profile(double a, double width, double w, double rmax,
                            std::size_t nodes) {
  const double h = rmax / static_cast<double>(nodes);
  auto r = uniform_grid(h, rmax, nodes);
  std::vector<double> rho(nodes);
  double norm = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double d = (r[i] - a) / width;
    rho[i] = std::exp(-0.5 * d * d);
    norm += 4.0 * M_PI * r[i] * r[i] * rho[i] * h;
  }
  std::vector<double> amp(nodes);
  for (std::size_t i = 0; i < nodes; ++i) amp[i] = std::sqrt(rho[i] * w / norm);
  return make_profile(std::move(r), std::move(amp), Geometry::radial3d);
}

}  // namespace

TEST_CASE("quantum potential grid: constant amplitude gives zero") {
  auto r = uniform_grid(0.1, 10.0, 100);
  std::vector<double> amp(100, 0.37);
  const auto p = make_profile(std::move(r), std::move(amp), Geometry::radial3d);
  for (const double q : quantum_potential_grid(p, natural())) {
    CHECK(q == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("quantum potential grid converges at second order on the Gaussian") {
  const GaussianPacket packet(1.0, 0.0, 1.0, 1.0, 3);
  double prev_err = 0.0;
  std::vector<double> errs;
  for (const std::size_t nodes : {400u, 800u, 1600u}) {
    const auto p = gaussian_profile(1.0, 8.0, nodes, false);
    const auto q = quantum_potential_grid(p, natural());
    double err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.r[i] > 6.0) break;  // compare over the bulk
      err = std::max(err, std::abs(q[i] - packet_quantum_potential(packet, p.r[i], 0.0)));
    }
    errs.push_back(err);
    prev_err = err;
  }
  (void)prev_err;
  const double order1 = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 >= 1.9);
  CHECK(order2 >= 1.9);
}

TEST_CASE("quantum potential grid: exponential profile matches the symbolic form") {
  // u = e^{-r}: Lap u / u = 1 - 2/r, so Q = -(1/2)(1 - 2/r)
  const std::size_t nodes = 2000;
  auto r = uniform_grid(10.0 / nodes, 10.0, nodes);
  std::vector<double> amp(nodes);
  for (std::size_t i = 0; i < nodes; ++i) amp[i] = std::exp(-r[i]);
  const auto p = make_profile(std::move(r), std::move(amp), Geometry::radial3d);
  const auto q = quantum_potential_grid(p, natural());
  for (std::size_t i = 5; i + 5 < p.size(); ++i) {
    const double expected = -0.5 * (1.0 - 2.0 / p.r[i]);
    CHECK(q[i] == doctest::Approx(expected).epsilon(1e-4));
  }
}

TEST_CASE("quantum potential grid flags interior zeros and is scale-free") {
  auto r = uniform_grid(0.1, 1.0, 10);
  std::vector<double> amp(10, 1.0);
  amp[4] = 0.0;
  const auto p = make_profile(r, amp, Geometry::radial3d);
  CHECK_THROWS_WITH_AS(quantum_potential_grid(p, natural()), doctest::Contains("node 4"),
                       std::domain_error);

  const auto base = gaussian_profile(1.0, 8.0, 200, false);
  std::vector<double> scaled_amp(base.amp);
  for (auto& a : scaled_amp) a *= 17.3;
  const auto scaled = make_profile(base.r, scaled_amp, Geometry::radial3d);
  const auto q1 = quantum_potential_grid(base, natural());
  const auto q2 = quantum_potential_grid(scaled, natural());
  for (std::size_t i = 0; i < q1.size(); ++i)
    CHECK(q1[i] == doctest::Approx(q2[i]).epsilon(1e-12));
}

TEST_CASE("quantum force grid: analytic gradient, constants, symmetry") {
  const GaussianPacket packet(1.0, 0.0, 1.0, 1.0, 3);
  const auto p = gaussian_profile(1.0, 8.0, 1600, false);
  const auto q = quantum_potential_grid(p, natural());
  const auto f = quantum_force_grid(q, p.spacing());
  for (std::size_t i = 2; i < p.size(); ++i) {
    if (p.r[i] > 5.0) break;
    CHECK(f[i] ==
          doctest::Approx(packet_quantum_force(packet, p.r[i], 0.0)).epsilon(5e-4));
  }

  std::vector<double> constq(64, 3.3);
  for (const double v : quantum_force_grid(constq, 0.1)) {
    CHECK(v == doctest::Approx(0.0));
  }

  // odd symmetry for a symmetric 1D profile
  const std::size_t n = 201;
  auto x = uniform_grid(-5.0, 5.0, n);
  std::vector<double> amp(n);
  for (std::size_t i = 0; i < n; ++i) amp[i] = std::exp(-x[i] * x[i] / 4.0);
  const auto line = make_profile(std::move(x), std::move(amp), Geometry::line1d);
  const auto ql = quantum_potential_grid(line, natural());
  const auto fl = quantum_force_grid(ql, line.spacing());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    CHECK(fl[i] == doctest::Approx(-fl[n - 1 - i]).epsilon(1e-8));
  }
}

TEST_CASE("poisson: narrow shell reproduces the shell theorem") {
  const auto p = shell_profile(2.0, 0.05, 1.0, 12.0, 6000);
  const auto phi = poisson_radial(p, natural());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.r[i] < 2.5) continue;
    CHECK(phi[i] == doctest::Approx(-1.0 / p.r[i]).epsilon(1e-6));
  }
  // interior of a shell is flat
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.r[i] > 1.5) break;
    CHECK(phi[i] == doctest::Approx(phi[0]).epsilon(1e-6));
  }
}

TEST_CASE("poisson: uniform ball interior potential") {
  const double a = 2.0;
  const std::size_t nodes = 8000;
  auto r = uniform_grid(16.0 / nodes, 16.0, nodes);
  std::vector<double> amp(nodes, 0.0);
  const double rho = 1.0 / (4.0 / 3.0 * M_PI * a * a * a);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (r[i] <= a) amp[i] = std::sqrt(rho);
  }
  const auto p = make_profile(std::move(r), std::move(amp), Geometry::radial3d);
  const auto phi = poisson_radial(p, natural());
  // the sharp edge smears over one cell, so the closed interior form holds to
  // O(h) of the edge radius
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.r[i] >= 0.95 * a) break;
    const double expected = -(3.0 * a * a - p.r[i] * p.r[i]) / (2.0 * a * a * a);
    CHECK(phi[i] == doctest::Approx(expected).epsilon(2e-3));
  }
  // outside, the potential matches the mass the discrete profile carries
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.r[i] < 1.3 * a) continue;
    CHECK(phi[i] == doctest::Approx(-p.total_norm / p.r[i]).epsilon(1e-6));
  }
}

TEST_CASE("poisson: boundary value carries the total mass") {
  const auto p = gaussian_profile(1.0, 14.0, 3000, false);  // unnormalized
  const auto phi = poisson_radial(p, natural());
  CHECK(p.r.back() * phi.back() == doctest::Approx(-p.total_norm).epsilon(1e-8));

  // with m != 1  the boundary mass is m * total_norm (per-unit-mass potential)
  const auto scales = gravitational_scales(2.0, 1.0, 1.0);
  const auto phi2 = poisson_radial(p, scales);
  CHECK(p.r.back() * phi2.back() ==
        doctest::Approx(-scales.G * scales.m * p.total_norm).epsilon(1e-8));
}

TEST_CASE("poisson: monotone nonpositive, superposition, literal toggle") {
  const auto pa = gaussian_profile(1.0, 14.0, 2000, false);
  const auto pb = shell_profile(3.0, 0.1, 0.7, 14.0, 2000);
  std::vector<double> amp_sum(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i)
    amp_sum[i] = std::sqrt(pa.amp[i] * pa.amp[i] + pb.amp[i] * pb.amp[i]);
  const auto psum = make_profile(pa.r, amp_sum, Geometry::radial3d);

  const auto fa = poisson_radial(pa, natural());
  const auto fb = poisson_radial(pb, natural());
  const auto fs = poisson_radial(psum, natural());
  double prev = -1e300;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(fs[i] <= 0.0);
    CHECK(fs[i] >= prev);
    prev = fs[i];
    CHECK(fs[i] == doctest::Approx(fa[i] + fb[i]).epsilon(1e-9));
  }

  const auto scales = gravitational_scales(3.0, 1.0, 1.0);
  const auto phys = poisson_radial(pa, scales);
  const auto lit = poisson_radial(pa, scales, PoissonOptions{true});
  for (std::size_t i = 0; i < pa.size(); ++i)
    CHECK(lit[i] == doctest::Approx(phys[i] / 3.0).epsilon(1e-12));
}

TEST_CASE("poisson rejects non-decaying densities") {
  const std::size_t nodes = 1000;
  auto r = uniform_grid(10.0 / nodes, 10.0, nodes);
  std::vector<double> amp(nodes);
  for (std::size_t i = 0; i < nodes; ++i) amp[i] = 1.0 / r[i];  // norm grows linearly
  const auto p = make_profile(std::move(r), std::move(amp), Geometry::radial3d);
  CHECK_THROWS_WITH_AS(poisson_radial(p, natural()), doctest::Contains("decayed"),
                       std::domain_error);
}

TEST_CASE("mean quantum potential: closed Gaussian values and dilation slope") {
  // 1D: hbar^2 / (8 m sigma^2); 3D: 3 hbar^2 / (8 m sigma^2)
  for (const double sigma : {0.5, 1.0, 2.0}) {
    const GaussianPacket p1(sigma, 0.0, 1.0, 1.0, 1);
    CHECK(mean_quantum_potential(p1) ==
          doctest::Approx(1.0 / (8.0 * sigma * sigma)).epsilon(1e-12));
    const GaussianPacket p3(sigma, 0.0, 1.0, 1.0, 3);
    CHECK(mean_quantum_potential(p3) ==
          doctest::Approx(3.0 / (8.0 * sigma * sigma)).epsilon(1e-12));
  }

  // grid path agrees with the analytic value
  const auto prof = gaussian_profile(1.0, 12.0, 4000);
  CHECK(mean_quantum_potential(prof, natural()) ==
        doctest::Approx(3.0 / 8.0).epsilon(1e-6));

  // dilation sweep on proportionally scaled grids: log-log slope -2
  std::vector<double> logs, logq;
  for (const double lam : {1.0, 2.0, 4.0}) {
    const auto prof_l = gaussian_profile(lam, 12.0 * lam, 4000);
    logs.push_back(std::log(lam));
    logq.push_back(std::log(mean_quantum_potential(prof_l, natural())));
  }
  const auto fit = num::fit_line(logs, logq);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-3));

  // non-normalized input names the measured norm
  const auto raw = gaussian_profile(1.0, 12.0, 500, false);
  CHECK_THROWS_WITH_AS(mean_quantum_potential(raw, natural()),
                       doctest::Contains("norm"), std::domain_error);
}

TEST_CASE("mean self-gravity: Monte-Carlo oracle and closed form") {
  const double sigma = 1.3;
  const auto scales = natural();
  const GaussianPacket packet(sigma, 0.0, 1.0, 1.0, 3);
  const double analytic = mean_self_gravity(packet, scales);
  CHECK(analytic == doctest::Approx(-1.0 / (std::sqrt(M_PI) * sigma)).epsilon(1e-10));

  // 10^7-pair Monte-Carlo estimate of  -G m^2 E[ 1/|x - x'| ]
  std::mt19937_64 rng(20240811);
  auto normal = [&rng]() {
    // Box-Muller on deterministic uniforms
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  const std::size_t n = 10'000'000;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double d2 = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double d = sigma * (normal() - normal());
      d2 += d * d;
    }
    const double val = -1.0 / std::sqrt(d2);
    const double delta = val - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (val - mean);
  }
  const double stderr_mc = std::sqrt(m2 / static_cast<double>(n - 1) /
                                     static_cast<double>(n));
  CHECK(std::abs(analytic - mean) < 3.0 * stderr_mc);

  // grid path against the analytic overload
  const auto prof = gaussian_profile(sigma, 16.0, 4000);
  CHECK(mean_self_gravity(prof, scales) == doctest::Approx(analytic).epsilon(1e-6));

  // dilation sweep: slope -1
  std::vector<double> logs, logu;
  for (const double lam : {1.0, 2.0, 4.0}) {
    const auto prof_l = gaussian_profile(lam, 16.0 * lam, 4000);
    logs.push_back(std::log(lam));
    logu.push_back(std::log(-mean_self_gravity(prof_l, scales)));
  }
  const auto fit = num::fit_line(logs, logu);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("mean self-gravity rejects 1D geometry") {
  auto x = uniform_grid(-5.0, 5.0, 100);
  std::vector<double> amp(100);
  for (std::size_t i = 0; i < 100; ++i) amp[i] = std::exp(-x[i] * x[i] / 4.0);
  auto p = make_profile(std::move(x), std::move(amp), Geometry::line1d).normalized();
  CHECK_THROWS_WITH_AS(mean_self_gravity(p, natural()), doctest::Contains("1D"),
                       std::domain_error);
  const GaussianPacket p1(1.0, 0.0, 1.0, 1.0, 1);
  CHECK_THROWS_AS(mean_self_gravity(p1, natural()), std::domain_error);
}

TEST_CASE("two disjoint shells: pairwise cross energy is -G m^2 w_a w_b / b") {
  const double wa = 0.4, wb = 0.6, a = 1.5, b = 4.0;
  const auto scales = natural();
  const auto sa = shell_profile(a, 0.05, wa, 12.0, 6000);
  const auto sb = shell_profile(b, 0.05, wb, 12.0, 6000);
  std::vector<double> amp(sa.size());
  for (std::size_t i = 0; i < sa.size(); ++i)
    amp[i] = std::sqrt(sa.amp[i] * sa.amp[i] + sb.amp[i] * sb.amp[i]);
  const auto both = make_profile(sa.r, amp, Geometry::radial3d);

  // bilinearity of the 1/2-convention pair energy isolates the cross term
  auto pair_raw = [&](const RadialProfile& p) {
    const auto phi = poisson_radial(p, scales);
    std::vector<double> f(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      f[i] = 0.5 * scales.m * p.amp[i] * p.amp[i] * phi[i];
    return volume_integral(p, f);
  };
  const double cross = pair_raw(both) - pair_raw(sa) - pair_raw(sb);
  CHECK(cross == doctest::Approx(-wa * wb / b).epsilon(1e-5));
}

TEST_CASE("energy functional: pinned values") {
  const auto scales = natural();
  CHECK(energy_functional(1.0, scales) == doctest::Approx(-0.5).epsilon(1e-14));
  // root at half the critical width
  CHECK(energy_functional(0.5, scales) == doctest::Approx(0.0).epsilon(1e-14));
  // vanishes from below at large width
  CHECK(energy_functional(1e6, scales) < 0.0);
  CHECK(std::abs(energy_functional(1e6, scales)) < 2e-6);
  CHECK_THROWS_AS(energy_functional(0.0, scales), std::domain_error);
}

TEST_CASE("critical width: closed form, numeric minimizer, mass scaling") {
  const auto rep1 = critical_width(natural());
  CHECK(rep1.sigma_star == 1.0);
  CHECK(rep1.sigma_star_numeric == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep1.E_at_min == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rep1.mean_Q_at_min == doctest::Approx(0.5).epsilon(1e-12));

  const auto rep2 = critical_width(gravitational_scales(2.0, 1.0, 1.0));
  CHECK(rep2.sigma_star == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(std::abs(rep2.sigma_star_numeric - rep2.sigma_star) <= 1e-10 * rep2.sigma_star);

  // <Q>_min follows G^2 m^5 / (2 hbar^2): log-log slope 5 in m
  std::vector<double> logm, logq;
  for (const double m : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto rep = critical_width(gravitational_scales(m, 1.0, 1.0));
    logm.push_back(std::log(m));
    logq.push_back(std::log(rep.mean_Q_at_min));
  }
  const auto fit = num::fit_line(logm, logq);
  CHECK(fit.slope == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("force balance at the critical width: d<Q>/ds equals d<Ug>/ds") {
  // the paper's model averages: <Q> = hbar^2/(2 m s^2), <Ug> = G m^2 / s
  const auto scales = gravitational_scales(1.7, 1.0, 1.0);
  const double s_star = scales.length_scale;
  auto mean_q = [&](double s) {
    return scales.hbar * scales.hbar / (2.0 * scales.m * s * s);
  };
  auto mean_ug = [&](double s) { return scales.G * scales.m * scales.m / s; };
  const double h = 1e-6 * s_star;
  const double dq = (mean_q(s_star + h) - mean_q(s_star - h)) / (2 * h);
  const double dug = (mean_ug(s_star + h) - mean_ug(s_star - h)) / (2 * h);
  CHECK(dq == doctest::Approx(dug).epsilon(1e-8));
}
