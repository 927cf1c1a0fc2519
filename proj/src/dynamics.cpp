#include "bohmgrav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "bohmgrav/errors.hpp"
#include "bohmgrav/fields.hpp"
#include "bohmgrav/numerics.hpp"
#include "fft.hpp"

namespace bohmgrav {

namespace {

using cplx = std::complex<double>;

RadialProfile profile_from_state(const EvolutionState& state) {
  std::vector<double> amp(state.psi.size());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::abs(state.psi[i]);
  return make_profile(state.grid, amp, state.geometry);
}

double state_norm(const EvolutionState& state) {
  return profile_from_state(state).total_norm;
}

// deterministic uniform in [0, 1) independent of library distributions
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::pair<std::size_t, std::size_t> positive_window(std::span<const double> amp,
                                                    double floor_frac) {
  const double peak = *std::max_element(amp.begin(), amp.end());
  const double cut = floor_frac * peak;
  std::size_t first = 0;
  while (first < amp.size() && amp[first] < cut) ++first;
  std::size_t last = amp.size();
  while (last > first && amp[last - 1] < cut) --last;
  if (last <= first) throw std::domain_error("force_balance_scan: empty amplitude window");
  return {first, last};
}

}  // namespace

EvolutionState gaussian_state_1d(double sigma0, double u, double m, double hbar,
                                 double center, double half_span, std::size_t nodes) {
  if (!(sigma0 > 0.0) || !(half_span > 0.0) || nodes < 8)
    throw std::domain_error("gaussian_state_1d: bad packet or grid parameters");
  EvolutionState st;
  st.geometry = Geometry::line1d;
  st.grid = uniform_grid(center - half_span, center + half_span, nodes);
  st.psi.resize(nodes);
  const double k = m * u / hbar;
  const double pref = std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double d = st.grid[i] - center;
    st.psi[i] = pref * std::exp(-d * d / (4.0 * sigma0 * sigma0)) *
                std::exp(cplx(0.0, k * st.grid[i]));
  }
  const double norm = state_norm(st);
  const double c = 1.0 / std::sqrt(norm);
  for (auto& v : st.psi) v *= c;
  st.norm = 1.0;
  return st;
}

EvolutionState gaussian_state_radial(double sigma0, double r_max, std::size_t nodes) {
  if (!(sigma0 > 0.0) || !(r_max > 0.0) || nodes < 8)
    throw std::domain_error("gaussian_state_radial: bad packet or grid parameters");
  EvolutionState st;
  st.geometry = Geometry::radial3d;
  const double h = r_max / static_cast<double>(nodes);
  st.grid = uniform_grid(h, r_max, nodes);
  st.psi.resize(nodes);
  const double pref = std::pow(2.0 * M_PI * sigma0 * sigma0, -0.75);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double r = st.grid[i];
    st.psi[i] = pref * std::exp(-r * r / (4.0 * sigma0 * sigma0));
  }
  st.psi.back() = 0.0;
  const double norm = state_norm(st);
  const double c = 1.0 / std::sqrt(norm);
  for (auto& v : st.psi) v *= c;
  st.norm = 1.0;
  return st;
}

EvolutionState state_from_profile(const RadialProfile& profile) {
  EvolutionState st;
  st.geometry = profile.geometry;
  st.grid = profile.r;
  st.psi.assign(profile.amp.begin(), profile.amp.end());
  st.norm = profile.total_norm;
  return st;
}

double measured_width(const EvolutionState& state) {
  const auto prof = profile_from_state(state);
  std::vector<double> f(state.psi.size());
  if (state.geometry == Geometry::line1d) {
    const double mean = measured_mean(state);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = state.grid[i] - mean;
      f[i] = d * d * std::norm(state.psi[i]);
    }
    return std::sqrt(volume_integral(prof, f) / prof.total_norm);
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = state.grid[i] * state.grid[i] * std::norm(state.psi[i]);
  return std::sqrt(volume_integral(prof, f) / prof.total_norm / 3.0);
}

double measured_mean(const EvolutionState& state) {
  if (state.geometry != Geometry::line1d) return 0.0;
  const auto prof = profile_from_state(state);
  std::vector<double> f(state.psi.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = state.grid[i] * std::norm(state.psi[i]);
  return volume_integral(prof, f) / prof.total_norm;
}

namespace {

double line_kinetic_energy(const std::vector<cplx>& psik, std::span<const double> k2,
                           double dx, std::size_t n, double m, double hbar) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += k2[j] * std::norm(psik[j]);
  return hbar * hbar / (2.0 * m) * acc * dx / static_cast<double>(n);
}

}  // namespace

std::vector<EvolutionState> evolve_free(const EvolutionState& psi0, double dt,
                                        std::size_t steps, const EvolveOptions& opt) {
  if (psi0.geometry != Geometry::line1d)
    throw std::domain_error("evolve_free: expects a line1d state");
  if (!(dt > 0.0)) throw std::domain_error("evolve_free: dt must be positive");
  const std::size_t n = psi0.psi.size();
  const double dx = psi0.grid[1] - psi0.grid[0];
  const double span = psi0.grid.back() - psi0.grid.front() + dx;  // periodic length

  if (std::max(std::abs(psi0.psi.front()), std::abs(psi0.psi.back())) >
      opt.leak_threshold)
    throw std::domain_error(
        "evolve_free: initial boundary amplitude exceeds the leak threshold; widen the "
        "grid");

  Fft1d fft(n);
  std::vector<double> k2(n);
  std::vector<cplx> kin_phase(n), pot_half(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jj = j < n / 2 ? static_cast<double>(j)
                                : static_cast<double>(j) - static_cast<double>(n);
    const double k = 2.0 * M_PI * jj / span;
    k2[j] = k * k;
    kin_phase[j] = std::exp(cplx(0.0, -opt.hbar * k2[j] * dt / (2.0 * opt.m)));
  }
  std::vector<double> pot(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = -opt.m * opt.g * psi0.grid[i];
    pot_half[i] = std::exp(cplx(0.0, -pot[i] * dt / (2.0 * opt.hbar)));
  }

  std::vector<cplx> psi = psi0.psi;
  std::vector<cplx> work(n);

  auto snapshot = [&](double t) {
    EvolutionState st;
    st.t = t;
    st.grid = psi0.grid;
    st.psi = psi;
    st.geometry = Geometry::line1d;
    st.norm = state_norm(st);
    work = psi;
    fft.forward(work);
    double vexp = 0.0;
    for (std::size_t i = 0; i < n; ++i) vexp += pot[i] * std::norm(psi[i]);
    st.energy =
        line_kinetic_energy(work, k2, dx, n, opt.m, opt.hbar) + vexp * dx;
    return st;
  };

  std::vector<EvolutionState> frames;
  frames.push_back(snapshot(psi0.t));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) psi[i] *= pot_half[i];
    fft.forward(psi);
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kin_phase[j] * inv_n;
    fft.backward(psi);
    for (std::size_t i = 0; i < n; ++i) psi[i] *= pot_half[i];

    const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
    if (edge > opt.leak_threshold)
      throw NumericError("evolve_free: boundary leakage " + std::to_string(edge) +
                         " at step " + std::to_string(s) + "; run aborted");
    if (s % opt.store_every == 0 || s == steps)
      frames.push_back(snapshot(psi0.t + dt * static_cast<double>(s)));
  }
  return frames;
}

std::vector<EvolutionState> evolve_sn(const EvolutionState& psi0, double dt,
                                      std::size_t steps, const PhysicalScales& scales,
                                      const SnEvolveOptions& opt) {
  if (psi0.geometry != Geometry::radial3d)
    throw std::domain_error("evolve_sn: expects a radial3d state");
  if (!(dt > 0.0)) throw std::domain_error("evolve_sn: dt must be positive");
  const std::size_t n = psi0.psi.size();
  const std::size_t ni = n - 1;  // interior sine-transform nodes
  const double h = psi0.grid[1] - psi0.grid[0];
  const double r_max = psi0.grid.back();

  Dst1 dst(ni);
  std::vector<double> kin(ni);
  for (std::size_t j = 0; j < ni; ++j) {
    const double k = M_PI * static_cast<double>(j + 1) / r_max;
    kin[j] = scales.hbar * k * k / (2.0 * scales.m);  // omega(k)
  }

  std::vector<cplx> psi = psi0.psi;
  psi.back() = 0.0;
  std::vector<double> vre(ni), vim(ni), wre(ni), wim(ni);

  auto potential_now = [&]() {
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) amp[i] = std::abs(psi[i]);
    const auto prof = make_profile(psi0.grid, amp, Geometry::radial3d);
    return poisson_radial(prof, scales);  // per-unit-mass phi
  };

  auto snapshot = [&](double t) {
    EvolutionState st;
    st.t = t;
    st.grid = psi0.grid;
    st.psi = psi;
    st.geometry = Geometry::radial3d;
    const auto prof = profile_from_state(st);
    st.norm = prof.total_norm;
    // kinetic + pairwise gravitational energy
    std::vector<double> rre(n), rim(n);
    for (std::size_t i = 0; i < n; ++i) {
      rre[i] = psi0.grid[i] * psi[i].real();
      rim[i] = psi0.grid[i] * psi[i].imag();
    }
    const auto dre = num::derivative(rre, h, 4);
    const auto dim = num::derivative(rim, h, 4);
    std::vector<double> dsq(n);
    for (std::size_t i = 0; i < n; ++i) dsq[i] = dre[i] * dre[i] + dim[i] * dim[i];
    const double kin_inner = std::norm(psi[0]) * h;  // v' ~ psi(0) on [0, r1]
    const double t_exp = scales.hbar * scales.hbar / (2.0 * scales.m) * 4.0 * M_PI *
                         (kin_inner + num::trapezoid(dsq, h));
    const auto prof_n = prof.total_norm > 0 ? prof.normalized() : prof;
    st.energy = t_exp + pair_gravitational_energy(prof_n, scales) * prof.total_norm *
                            prof.total_norm;
    return st;
  };

  std::vector<EvolutionState> frames;
  frames.push_back(snapshot(psi0.t));
  for (std::size_t s = 1; s <= steps; ++s) {
    std::vector<double> phi;
    try {
      phi = potential_now();
    } catch (const std::domain_error& e) {
      throw NumericError("evolve_sn: Poisson sub-solve failed at step " +
                         std::to_string(s) + ": " + e.what());
    }
    // half potential (frozen through the step), full kinetic, half potential
    for (std::size_t i = 0; i < n; ++i) {
      const double vpot = scales.m * phi[i];
      psi[i] *= std::exp(cplx(0.0, -vpot * dt / (2.0 * scales.hbar)));
    }
    for (std::size_t i = 0; i < ni; ++i) {
      vre[i] = psi0.grid[i] * psi[i].real();
      vim[i] = psi0.grid[i] * psi[i].imag();
    }
    dst.transform(vre, wre);
    dst.transform(vim, wim);
    for (std::size_t j = 0; j < ni; ++j) {
      const cplx rot = std::exp(cplx(0.0, -kin[j] * dt)) * dst.renorm();
      const cplx v = cplx(wre[j], wim[j]) * rot;
      wre[j] = v.real();
      wim[j] = v.imag();
    }
    dst.transform(wre, vre);
    dst.transform(wim, vim);
    for (std::size_t i = 0; i < ni; ++i) {
      psi[i] = cplx(vre[i], vim[i]) / psi0.grid[i];
      const double vpot = scales.m * phi[i];
      psi[i] *= std::exp(cplx(0.0, -vpot * dt / (2.0 * scales.hbar)));
    }
    psi.back() = 0.0;

    double edge = 0.0;
    for (std::size_t i = n >= 4 ? n - 4 : 0; i + 1 < n; ++i)
      edge = std::max(edge, std::abs(psi[i]));
    if (edge > opt.leak_threshold)
      throw NumericError("evolve_sn: boundary amplitude " + std::to_string(edge) +
                         " at step " + std::to_string(s) + "; run aborted");
    if (s % opt.store_every == 0 || s == steps)
      frames.push_back(snapshot(psi0.t + dt * static_cast<double>(s)));
  }
  return frames;
}

namespace {

struct VelocityField {
  std::vector<double> v;
  std::vector<char> node;  // |psi| under the floor
};

VelocityField velocity_field(const EvolutionState& st, double m, double hbar,
                             double node_floor) {
  const std::size_t n = st.psi.size();
  const double h = st.grid[1] - st.grid[0];
  double peak = 0.0;
  for (const auto& p : st.psi) peak = std::max(peak, std::abs(p));
  const double floor = node_floor * peak;

  VelocityField f;
  f.v.assign(n, 0.0);
  f.node.assign(n, 0);
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = st.psi[i].real();
    im[i] = st.psi[i].imag();
  }
  const auto dre = num::derivative(re, h, 2);
  const auto dim = num::derivative(im, h, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = std::norm(st.psi[i]);
    if (std::abs(st.psi[i]) < floor) {
      f.node[i] = 1;
      continue;
    }
    // Im(psi' / psi) = (re * im' - im * re') / |psi|^2
    f.v[i] = hbar / m * (re[i] * dim[i] - im[i] * dre[i]) / a2;
  }
  return f;
}

}  // namespace

TrajectoryEnsemble bohmian_trajectories(std::span<const EvolutionState> states,
                                        std::size_t n_seeds, std::uint64_t rng_seed,
                                        double m, double hbar,
                                        const TrajectoryOptions& opt) {
  if (states.size() < 2)
    throw std::domain_error("bohmian_trajectories: need at least two stored frames");
  if (n_seeds == 0) throw std::domain_error("bohmian_trajectories: need at least one seed");
  const auto& first = states[0];
  const std::size_t n = first.psi.size();
  const double h = first.grid[1] - first.grid[0];

  // inverse-CDF sampling of |psi(.,0)|^2 with the geometry measure
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = first.geometry == Geometry::radial3d
                         ? 4.0 * M_PI * first.grid[i] * first.grid[i]
                         : 1.0;
    mass[i] = w * std::norm(first.psi[i]);
  }
  std::vector<double> cdf(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * h * (mass[i - 1] + mass[i]);
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::domain_error("bohmian_trajectories: empty density");

  std::mt19937_64 rng(rng_seed);
  std::vector<double> seeds(n_seeds);
  for (auto& s : seeds) {
    const double u = next_uniform(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t i = std::min<std::size_t>(
        cdf.size() - 1, static_cast<std::size_t>(it - cdf.begin()));
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    s = first.grid[i - 1] + frac * h;
  }

  std::vector<VelocityField> fields(states.size());
  for (std::size_t f = 0; f < states.size(); ++f)
    fields[f] = velocity_field(states[f], m, hbar, opt.node_floor);

  const double xlo = first.grid.front(), xhi = first.grid.back();
  auto sample = [&](const VelocityField& fld, double x, bool* bad) {
    if (x <= xlo || x >= xhi) {
      *bad = true;
      return 0.0;
    }
    const double s = (x - xlo) / h;
    const std::size_t i = std::min<std::size_t>(n - 2, static_cast<std::size_t>(s));
    const double frac = s - static_cast<double>(i);
    if (fld.node[i] || fld.node[i + 1]) {
      *bad = true;
      return 0.0;
    }
    return (1.0 - frac) * fld.v[i] + frac * fld.v[i + 1];
  };

  TrajectoryEnsemble ens;
  ens.sampler_rng_seed = rng_seed;
  ens.seeds = seeds;
  ens.times.resize(states.size());
  for (std::size_t f = 0; f < states.size(); ++f) ens.times[f] = states[f].t;
  ens.paths.assign(n_seeds, std::vector<double>(states.size(), 0.0));
  std::vector<char> dead(n_seeds, 0);

  for (std::size_t sd = 0; sd < n_seeds; ++sd) ens.paths[sd][0] = seeds[sd];
  for (std::size_t f = 0; f + 1 < states.size(); ++f) {
    const double dt = states[f + 1].t - states[f].t;
    const auto& fa = fields[f];
    const auto& fb = fields[f + 1];
    auto vmid = [&](double x, bool* bad) {
      return 0.5 * (sample(fa, x, bad) + sample(fb, x, bad));
    };
    for (std::size_t sd = 0; sd < n_seeds; ++sd) {
      double x = ens.paths[sd][f];
      if (dead[sd]) {
        ens.paths[sd][f + 1] = x;
        continue;
      }
      bool bad = false;
      const double k1 = sample(fa, x, &bad);
      const double k2 = vmid(x + 0.5 * dt * k1, &bad);
      const double k3 = vmid(x + 0.5 * dt * k2, &bad);
      const double k4 = sample(fb, x + dt * k3, &bad);
      if (bad) {
        dead[sd] = 1;
        ens.excluded.push_back(sd);
        ens.paths[sd][f + 1] = x;
        continue;
      }
      ens.paths[sd][f + 1] = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
  std::sort(ens.excluded.begin(), ens.excluded.end());
  return ens;
}

std::vector<cplx> equivalence_transform(std::span<const cplx> field,
                                        std::span<const double> grid, double g, double t,
                                        TransformDirection direction, double m,
                                        double hbar) {
  if (field.size() != grid.size())
    throw std::domain_error("equivalence_transform: field/grid size mismatch");
  std::vector<cplx> out(field.size());
  const double t3 = t * t * t;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double x = grid[i];
    const double arg = direction == TransformDirection::to_free
                           ? m / hbar * (g * g * t3 / 6.0 - x * g * t)
                           : m / hbar * (g * g * t3 / 3.0 + x * g * t);
    out[i] = field[i] * std::exp(cplx(0.0, arg));
  }
  return out;
}

ForceBalanceReport force_balance_scan(const EvolutionState& state,
                                      const PhysicalScales& scales, double floor_frac) {
  if (state.geometry != Geometry::radial3d)
    throw std::domain_error("force_balance_scan: expects a radial3d state");
  const auto prof = profile_from_state(state);
  const double h = prof.spacing();
  const auto [wa, wb] = positive_window(prof.amp, floor_frac);
  if (wb - wa < 9)
    throw std::domain_error("force_balance_scan: amplitude window under 9 nodes");

  std::vector<double> r_s(prof.r.begin() + wa, prof.r.begin() + wb);
  std::vector<double> amp_s(prof.amp.begin() + wa, prof.amp.begin() + wb);
  const auto prof_s = make_profile(r_s, amp_s, Geometry::radial3d);
  const auto q = quantum_potential_grid(prof_s, scales);
  const auto fq = quantum_force_grid(q, h);

  const auto phi = poisson_radial(prof, scales);
  std::vector<double> phi_s(phi.begin() + wa, phi.begin() + wb);
  auto fg = num::derivative(phi_s, h, 2);
  for (auto& v : fg) v *= -scales.m;

  ForceBalanceReport rep;
  const std::size_t trim = 2;  // one-sided stencil margin
  rep.window_begin = wa + trim;
  rep.window_end = wb - trim;
  rep.min_physical = rep.min_literal = std::numeric_limits<double>::infinity();
  for (std::size_t i = trim; i + trim < r_s.size(); ++i) {
    rep.r.push_back(r_s[i]);
    rep.f_q.push_back(fq[i]);
    rep.f_g.push_back(fg[i]);
    const double ip = fq[i] + fg[i];
    const double il = fq[i] - fg[i];
    rep.imbalance_physical.push_back(ip);
    rep.imbalance_literal.push_back(il);
    rep.max_physical = std::max(rep.max_physical, std::abs(ip));
    rep.max_literal = std::max(rep.max_literal, std::abs(il));
    if (std::abs(ip) < rep.min_physical) {
      rep.min_physical = std::abs(ip);
      rep.r_min_physical = r_s[i];
    }
    if (std::abs(il) < rep.min_literal) {
      rep.min_literal = std::abs(il);
      rep.r_min_literal = r_s[i];
    }
  }
  return rep;
}

}  // namespace bohmgrav
