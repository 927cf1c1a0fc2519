// Command-line front end: packet, critical, stationary, evolve, sweep,
// equivalence subcommands emitting deterministic CSV.
//
// Exit codes: 0 success, 2 domain/config error, 3 numeric non-convergence.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bohmgrav/numerics.hpp"

#include "bohmgrav/config.hpp"
#include "bohmgrav/csv.hpp"
#include "bohmgrav/dynamics.hpp"
#include "bohmgrav/errors.hpp"
#include "bohmgrav/fields.hpp"
#include "bohmgrav/packet.hpp"
#include "bohmgrav/stationary.hpp"
#include "bohmgrav/units.hpp"

namespace bg = bohmgrav;
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCommonKeys[] = {"unit_system", "hbar", "G", "mass", "out"};

std::string hex_hash(const bg::RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  return buf;
}

std::vector<std::string> standard_comments(const bg::RunConfig& cfg) {
  return {std::string("version=") + std::string(bg::kToolVersion),
          "config_hash=" + hex_hash(cfg)};
}

bg::PhysicalScales scales_from_config(const bg::RunConfig& cfg) {
  const std::string units = cfg.get_string("unit_system", "natural");
  if (units == "natural") {
    return bg::gravitational_scales(cfg.get_double("mass", 1.0),
                                    cfg.get_double("hbar", 1.0), cfg.get_double("G", 1.0));
  }
  if (units == "si") {
    return bg::gravitational_scales(cfg.get_double("mass", 1.0),
                                    cfg.get_double("hbar", bg::codata2018::hbar),
                                    cfg.get_double("G", bg::codata2018::G));
  }
  throw std::domain_error("config: unit_system must be 'natural' or 'si', got '" +
                          units + "'");
}

// Output sink: a file inside --out, or stdout when no directory was given.
class Emitter {
 public:
  explicit Emitter(const std::string& out_dir) : dir_(out_dir) {
    if (!dir_.empty()) {
      fs::create_directories(dir_);
      if (!fs::is_directory(dir_))
        throw std::domain_error("out: '" + dir_ + "' is not a writable directory");
    }
  }

  bool has_dir() const { return !dir_.empty(); }

  void emit(const std::string& name, const bg::CsvTable& table) const {
    if (dir_.empty()) {
      bg::write_csv(std::cout, table);
      return;
    }
    const fs::path path = fs::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::domain_error("out: cannot write '" + path.string() + "'");
    bg::write_csv(os, table);
  }

 private:
  std::string dir_;
};

void require_out_dir(const Emitter& em, const char* sub) {
  if (!em.has_dir())
    throw std::domain_error(std::string(sub) + ": --out DIR is required (multi-file run)");
}

std::vector<std::string_view> merge_keys(std::initializer_list<std::string_view> extra) {
  std::vector<std::string_view> keys(std::begin(kCommonKeys), std::end(kCommonKeys));
  keys.insert(keys.end(), extra.begin(), extra.end());
  return keys;
}

// Q on the sub-grid where the amplitude is meaningfully nonzero; NaN outside.
std::vector<double> windowed_quantum_potential(const bg::RadialProfile& prof,
                                               const bg::PhysicalScales& scales) {
  std::vector<double> q(prof.size(), std::numeric_limits<double>::quiet_NaN());
  double peak = 0.0;
  for (const double a : prof.amp) peak = std::max(peak, a);
  const double cut = 1e-6 * peak;
  std::size_t first = 0;
  while (first < prof.size() && prof.amp[first] < cut) ++first;
  std::size_t last = prof.size();
  while (last > first && prof.amp[last - 1] < cut) --last;
  if (last - first < 5) return q;
  std::vector<double> r_s(prof.r.begin() + first, prof.r.begin() + last);
  std::vector<double> amp_s(prof.amp.begin() + first, prof.amp.begin() + last);
  const auto sub = bg::make_profile(std::move(r_s), std::move(amp_s), prof.geometry);
  const auto qs = bg::quantum_potential_grid(sub, scales);
  for (std::size_t i = 0; i < qs.size(); ++i) q[first + i] = qs[i];
  return q;
}

// ---------------------------------------------------------------------------

int run_packet(const bg::RunConfig& cfg) {
  const auto keys =
      merge_keys({"sigma0", "velocity", "dim", "t_max", "frames", "x_seed"});
  cfg.require_known(keys);
  const auto scales = scales_from_config(cfg);
  const double sigma0 = cfg.get_double("sigma0", 1.0);
  const double u = cfg.get_double("velocity", 0.0);
  const int dim = static_cast<int>(cfg.get_size("dim", 1));
  const double t_max = cfg.get_double("t_max", 2.0);
  const std::size_t frames = cfg.get_size("frames", 50);
  const double x_seed = cfg.get_double("x_seed", sigma0);
  const bg::GaussianPacket packet(sigma0, u, scales.m, scales.hbar, dim);

  bg::CsvTable table;
  table.comments = standard_comments(cfg);
  table.columns = {"t", "sigma", "x_seed", "x_t", "Q_center", "f_at_sigma"};
  for (std::size_t i = 0; i <= frames; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(frames);
    const double sigma = bg::packet_width(packet, t);
    const double x_t = bg::packet_trajectory(packet, x_seed, t);
    const double q_center = bg::packet_quantum_potential(packet, packet.u * t, t);
    const double f_sigma = bg::packet_quantum_force(packet, packet.u * t + sigma, t);
    table.rows.push_back({t, sigma, x_seed, x_t, q_center, f_sigma});
  }
  Emitter em(cfg.get_string("out", ""));
  em.emit("packet.csv", table);
  return 0;
}

int run_critical(const bg::RunConfig& cfg) {
  const auto keys = merge_keys({"mass_list"});
  cfg.require_known(keys);
  const std::string units = cfg.get_string("unit_system", "natural");
  const double hbar = cfg.get_double("hbar", units == "si" ? bg::codata2018::hbar : 1.0);
  const double g_const = cfg.get_double("G", units == "si" ? bg::codata2018::G : 1.0);
  const auto masses = bg::parse_double_list(cfg.get_string("mass_list", "1"));

  bg::CsvTable table;
  table.comments = standard_comments(cfg);
  table.columns = {"m", "sigma_star", "E_at_min", "mean_Q_at_min"};
  for (const double m : masses) {
    const auto scales = bg::gravitational_scales(m, hbar, g_const);
    const auto rep = bg::critical_width(scales);
    table.rows.push_back({m, rep.sigma_star, rep.E_at_min, rep.mean_Q_at_min});
  }
  Emitter em(cfg.get_string("out", ""));
  em.emit("critical.csv", table);
  return 0;
}

bg::CsvTable stationary_table(const bg::RunConfig& cfg, const bg::StationarySolution& sol,
                              const bg::PhysicalScales& scales) {
  bg::CsvTable table;
  table.comments = standard_comments(cfg);
  std::ostringstream sum;
  sum << "summary E=" << bg::format_double(sol.energy)
      << " half_width=" << bg::format_double(bg::profile_half_width(sol.profile))
      << " residual_hj=" << bg::format_double(sol.residual_hj)
      << " residual_eq33=" << bg::format_double(sol.residual_eq33)
      << " iterations=" << sol.iterations
      << " solver=" << (sol.solver_id == bg::SolverId::shooting ? "shooting" : "relaxation");
  table.comments.push_back(sum.str());
  table.columns = {"r", "sqrt_rho", "rho", "Q", "phi", "residual"};
  const auto q = windowed_quantum_potential(sol.profile, scales);
  for (std::size_t i = 0; i < sol.profile.size(); ++i) {
    const double amp = sol.profile.amp[i];
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (!std::isnan(q[i]) && !std::isnan(sol.energy))
      residual = q[i] + scales.m * sol.phi[i] - sol.energy;
    table.rows.push_back({sol.profile.r[i], amp, amp * amp, q[i], sol.phi[i], residual});
  }
  return table;
}

int run_stationary(const bg::RunConfig& cfg) {
  const auto keys = merge_keys({"mode", "rho0", "rmax", "nodes", "tol", "solver"});
  cfg.require_known(keys);
  const auto scales = scales_from_config(cfg);
  const std::string mode = cfg.get_string("mode", "physical");
  bg::StationarySolution sol;
  if (mode == "physical") {
    bg::GridConfig grid{cfg.get_double("rmax", 25.0 * scales.length_scale),
                        cfg.get_size("nodes", 5000)};
    const std::string solver = cfg.get_string("solver", "shooting");
    if (solver == "shooting")
      sol = bg::solve_sn_ground_state(scales, grid, cfg.get_double("tol", 1e-8));
    else if (solver == "relaxation")
      sol = bg::relax_sn_ground_state(scales, grid, cfg.get_double("tol", 1e-5));
    else
      throw std::domain_error("stationary: solver must be 'shooting' or 'relaxation'");
  } else if (mode == "literal") {
    bg::GridConfig grid{cfg.get_double("rmax", 8.0), cfg.get_size("nodes", 20000)};
    sol = bg::solve_eq33_literal(scales, cfg.get_double("rho0", 1.0), grid,
                                 cfg.get_double("tol", 1e-6));
  } else {
    throw std::domain_error("stationary: mode must be 'physical' or 'literal'");
  }
  Emitter em(cfg.get_string("out", ""));
  em.emit("stationary.csv", stationary_table(cfg, sol, scales));
  return 0;
}

int run_evolve(const bg::RunConfig& cfg) {
  const auto keys = merge_keys({"mode", "sigma0", "g", "dt", "steps", "seeds", "rng_seed",
                                "store_every", "half_span", "rmax", "nodes"});
  cfg.require_known(keys);
  const auto scales = scales_from_config(cfg);
  const std::string mode = cfg.get_string("mode", "free");
  const double sigma0 = cfg.get_double("sigma0", 1.0);
  const double dt = cfg.get_double("dt", 2e-3);
  const std::size_t steps = cfg.get_size("steps", 1000);
  const std::size_t store_every = cfg.get_size("store_every", 10);
  const std::size_t n_seeds = cfg.get_size("seeds", 0);
  const std::uint64_t rng_seed = cfg.get_uint64("rng_seed", 12345);

  Emitter em(cfg.get_string("out", ""));
  require_out_dir(em, "evolve");

  std::vector<bg::EvolutionState> frames;
  if (mode == "free") {
    const double half_span = cfg.get_double("half_span", 40.0 * sigma0);
    const std::size_t nodes = cfg.get_size("nodes", 2048);
    const auto psi0 =
        bg::gaussian_state_1d(sigma0, 0.0, scales.m, scales.hbar, 0.0, half_span, nodes);
    bg::EvolveOptions opt;
    opt.g = cfg.get_double("g", 0.0);
    opt.m = scales.m;
    opt.hbar = scales.hbar;
    opt.store_every = store_every;
    frames = bg::evolve_free(psi0, dt, steps, opt);
  } else if (mode == "sn") {
    const double rmax = cfg.get_double("rmax", 25.0 * scales.length_scale);
    const std::size_t nodes = cfg.get_size("nodes", 4096);
    const auto psi0 = bg::gaussian_state_radial(sigma0, rmax, nodes);
    bg::SnEvolveOptions opt;
    opt.store_every = store_every;
    frames = bg::evolve_sn(psi0, dt, steps, scales, opt);
  } else {
    throw std::domain_error("evolve: mode must be 'free' or 'sn'");
  }

  bg::CsvTable ft;
  ft.comments = standard_comments(cfg);
  ft.columns = {"t", "x", "density", "Q", "phi", "f_q", "f_g"};
  for (const auto& frame : frames) {
    std::vector<double> amp(frame.psi.size());
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::abs(frame.psi[i]);
    const auto prof = bg::make_profile(frame.grid, amp, frame.geometry);
    const auto q = windowed_quantum_potential(prof, scales);
    std::vector<double> fq(q.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> phi(q.size(), 0.0), fg(q.size(), 0.0);
    if (frame.geometry == bg::Geometry::radial3d) {
      phi = bg::poisson_radial(prof, scales);
      auto dphi = bg::num::derivative(phi, prof.spacing(), 2);
      for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = -scales.m * dphi[i];
    }
    // f_q from the windowed Q by plain central differences where defined
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
      if (!std::isnan(q[i - 1]) && !std::isnan(q[i + 1]))
        fq[i] = -(q[i + 1] - q[i - 1]) / (2.0 * prof.spacing());
    }
    for (std::size_t i = 0; i < frame.psi.size(); ++i) {
      ft.rows.push_back({frame.t, frame.grid[i], std::norm(frame.psi[i]), q[i], phi[i],
                         fq[i], fg[i]});
    }
  }
  em.emit("frames.csv", ft);

  if (n_seeds > 0) {
    const auto ens =
        bg::bohmian_trajectories(frames, n_seeds, rng_seed, scales.m, scales.hbar);
    bg::CsvTable tt;
    tt.comments = standard_comments(cfg);
    tt.comments.push_back("excluded_seeds=" + std::to_string(ens.excluded.size()));
    tt.columns = {"seed_id", "t", "x"};
    for (std::size_t sd = 0; sd < ens.paths.size(); ++sd) {
      for (std::size_t f = 0; f < ens.times.size(); ++f)
        tt.rows.push_back({static_cast<double>(sd), ens.times[f], ens.paths[sd][f]});
    }
    em.emit("trajectories.csv", tt);
  }
  return 0;
}

int run_sweep(const bg::RunConfig& cfg) {
  const auto keys = merge_keys({"mode", "mass_list", "rho0", "rmax", "nodes", "tol"});
  cfg.require_known(keys);
  const std::string units = cfg.get_string("unit_system", "natural");
  const double hbar = cfg.get_double("hbar", units == "si" ? bg::codata2018::hbar : 1.0);
  const double g_const = cfg.get_double("G", units == "si" ? bg::codata2018::G : 1.0);
  const std::string mode = cfg.get_string("mode", "literal_fig2");
  auto masses = bg::parse_double_list(cfg.get_string("mass_list", ""));
  std::sort(masses.begin(), masses.end());

  if (mode == "literal_fig2") {
    if (masses.size() < 4) throw std::domain_error("sweep: need >= 4 masses");
    if (masses.back() < 4.0 * masses.front())
      throw std::domain_error("sweep: masses must span at least a 4x range");
  } else if (mode == "physical") {
    if (masses.size() < 2) throw std::domain_error("sweep: need >= 2 masses");
  } else {
    throw std::domain_error("sweep: mode must be 'literal_fig2' or 'physical'");
  }

  Emitter em(cfg.get_string("out", ""));
  require_out_dir(em, "sweep");

  const double rho0 = cfg.get_double("rho0", 1.0);
  struct Row {
    double mass, half_width, energy, residual;
    bg::StationarySolution sol;
  };
  auto solve_one = [&](double m) {
    const auto scales = bg::gravitational_scales(m, hbar, g_const);
    bg::StationarySolution sol;
    if (mode == "literal_fig2") {
      bg::GridConfig grid{cfg.get_double("rmax", 8.0), cfg.get_size("nodes", 20000)};
      sol = bg::solve_eq33_literal(scales, rho0, grid, cfg.get_double("tol", 1e-6));
    } else {
      // grid follows the per-mass gravitational length so every solve is
      // equally resolved in dimensionless form
      bg::GridConfig grid{cfg.get_double("rmax", 25.0) * scales.length_scale,
                          cfg.get_size("nodes", 5000)};
      sol = bg::solve_sn_ground_state(scales, grid, cfg.get_double("tol", 1e-8));
    }
    const double hw = bg::profile_half_width(sol.profile);
    return Row{m, hw, sol.energy, sol.residual_eq33, std::move(sol)};
  };

  std::vector<std::future<Row>> futures;
  futures.reserve(masses.size());
  for (const double m : masses)
    futures.push_back(std::async(std::launch::async, solve_one, m));
  std::vector<Row> rows;
  rows.reserve(masses.size());
  for (auto& f : futures) {
    try {
      rows.push_back(f.get());
    } catch (const std::exception& e) {
      throw bg::NumericError(std::string("sweep: per-mass solve failed: ") + e.what());
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.mass < b.mass; });

  std::vector<double> logm, logw;
  for (const auto& row : rows) {
    logm.push_back(std::log(row.mass));
    logw.push_back(std::log(row.half_width));
  }
  const auto fit = bg::num::fit_line(logm, logw);

  bg::CsvTable st;
  st.comments = standard_comments(cfg);
  st.comments.push_back("fitted_exponent=" + bg::format_double(fit.slope));
  st.comments.push_back("fit_max_residual=" + bg::format_double(fit.max_residual));
  st.columns = {"m", "half_width", "E", "residual"};
  for (const auto& row : rows)
    st.rows.push_back({row.mass, row.half_width, row.energy, row.residual});
  em.emit("sweep.csv", st);

  for (const auto& row : rows) {
    const auto scales = bg::gravitational_scales(row.mass, hbar, g_const);
    std::ostringstream name;
    name << "profile_m" << bg::format_double(row.mass) << ".csv";
    em.emit(name.str(), stationary_table(cfg, row.sol, scales));
  }
  return 0;
}

int run_equivalence(const bg::RunConfig& cfg) {
  const auto keys = merge_keys({"g", "sigma0", "t_max", "levels", "nodes", "steps"});
  cfg.require_known(keys);
  const auto scales = scales_from_config(cfg);
  const double g = cfg.get_double("g", 0.5);
  const double sigma0 = cfg.get_double("sigma0", 1.0);
  const double t_max = cfg.get_double("t_max", 1.0);
  const std::size_t levels = cfg.get_size("levels", 3);
  const std::size_t nodes0 = cfg.get_size("nodes", 512);
  const std::size_t steps0 = cfg.get_size("steps", 250);

  bg::CsvTable table;
  table.comments = standard_comments(cfg);
  table.columns = {"level", "nodes", "dt", "pde_residual", "amplitude_deviation"};

  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    const std::size_t nodes = nodes0 << lvl;
    const std::size_t steps = steps0 << lvl;
    const double dt = t_max / static_cast<double>(steps);

    const auto psi0 =
        bg::gaussian_state_1d(sigma0, 0.0, scales.m, scales.hbar, 0.0, 24.0 * sigma0, nodes);
    bg::EvolveOptions opt;
    opt.g = g;
    opt.m = scales.m;
    opt.hbar = scales.hbar;

    // three consecutive split-step frames so the time difference refines with dt
    auto run_to = [&](std::size_t n_steps) {
      auto local = opt;
      local.store_every = n_steps;
      return bg::evolve_free(psi0, dt, n_steps, local).back();
    };
    const auto fa = run_to(steps - 1);
    const auto fb = run_to(steps);
    const auto fc = run_to(steps + 1);
    const double dt_fd = fb.t - fa.t;

    // evaluate Psi on the common X-grid (X = x - g t^2/2): cubic resample of
    // psi at the lab positions, then the pure-phase map with lab coordinates
    const double span = fb.grid[1] - fb.grid[0];
    auto on_x_grid = [&](const bg::EvolutionState& st) {
      std::vector<std::complex<double>> shifted(st.psi.size());
      std::vector<double> xlab(st.psi.size());
      const double offset = 0.5 * g * st.t * st.t;
      for (std::size_t i = 0; i < st.psi.size(); ++i) {
        const double x = st.grid[i] + offset;  // lab position for this X node
        xlab[i] = x;
        const double s = (x - st.grid.front()) / span;
        const auto j = static_cast<std::ptrdiff_t>(std::floor(s));
        if (j < 1 || j + 2 >= static_cast<std::ptrdiff_t>(st.psi.size())) {
          shifted[i] = 0.0;
          continue;
        }
        const double f = s - static_cast<double>(j);
        // 4-point Lagrange interpolation
        const auto p0 = st.psi[j - 1], p1 = st.psi[j], p2 = st.psi[j + 1],
                   p3 = st.psi[j + 2];
        shifted[i] = p0 * (-f * (f - 1.0) * (f - 2.0) / 6.0) +
                     p1 * ((f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0) +
                     p2 * (-(f + 1.0) * f * (f - 2.0) / 2.0) +
                     p3 * ((f + 1.0) * f * (f - 1.0) / 6.0);
      }
      return bg::equivalence_transform(shifted, xlab, g, st.t,
                                       bg::TransformDirection::to_free, scales.m,
                                       scales.hbar);
    };

    const auto pa = on_x_grid(fa);
    const auto pb = on_x_grid(fb);
    const auto pc = on_x_grid(fc);

    double peak = 0.0;
    for (const auto& v : pb) peak = std::max(peak, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < pb.size(); ++i) {
      if (std::abs(pb[i]) < 0.02 * peak) continue;
      const auto dpsi_dt = (pc[i] - pa[i]) / (2.0 * dt_fd);
      const auto lap = (pb[i - 1] - 2.0 * pb[i] + pb[i + 1]) / (span * span);
      const auto res = std::complex<double>(0.0, scales.hbar) * dpsi_dt +
                       scales.hbar * scales.hbar / (2.0 * scales.m) * lap;
      worst = std::max(worst, std::abs(res) / peak);
    }

    // pure-phase check on the final frame
    const auto direct = bg::equivalence_transform(fc.psi, fc.grid, g, fc.t,
                                                  bg::TransformDirection::to_free,
                                                  scales.m, scales.hbar);
    double amp_dev = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
      amp_dev = std::max(amp_dev, std::abs(std::abs(direct[i]) - std::abs(fc.psi[i])));

    table.rows.push_back({static_cast<double>(lvl), static_cast<double>(nodes), dt,
                          worst, amp_dev});
  }

  Emitter em(cfg.get_string("out", ""));
  em.emit("equivalence.csv", table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bohmian quantum potential / Schroedinger-Newton toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--set", overrides, "override config entries as key=value");

  std::string out_dir;
  app.add_option("--out", out_dir, "output directory for CSV artifacts");

  // subcommand-specific convenience flags mapped onto config keys
  std::map<std::string, std::string> flag_values;
  auto add_flag = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        "--" + key, [&flag_values, key](const std::string& v) { flag_values[key] = v; },
        help);
  };

  auto* packet = app.add_subcommand("packet", "analytic free-packet table");
  for (const auto* key : {"sigma0", "velocity", "dim", "t_max", "frames", "x_seed",
                          "mass", "hbar", "G", "unit_system"})
    add_flag(packet, key, "");

  auto* critical = app.add_subcommand("critical", "critical width vs mass");
  for (const auto* key : {"mass_list", "hbar", "G", "unit_system"})
    add_flag(critical, key, "");
  critical->add_option_function<std::string>(
      "--mass-list", [&](const std::string& v) { flag_values["mass_list"] = v; }, "");

  auto* stationary = app.add_subcommand("stationary", "stationary SN / Eq.-(33) solve");
  for (const auto* key : {"mode", "rho0", "rmax", "nodes", "tol", "solver", "mass",
                          "hbar", "G", "unit_system"})
    add_flag(stationary, key, "");

  auto* evolve = app.add_subcommand("evolve", "time-dependent propagation");
  for (const auto* key : {"mode", "sigma0", "g", "dt", "steps", "seeds", "rng_seed",
                          "store_every", "half_span", "rmax", "nodes", "mass", "hbar",
                          "G", "unit_system"})
    add_flag(evolve, key, "");
  evolve->add_option_function<std::string>(
      "--rng-seed", [&](const std::string& v) { flag_values["rng_seed"] = v; }, "");

  auto* sweep = app.add_subcommand("sweep", "width-vs-mass sweep with log-log fit");
  for (const auto* key :
       {"mode", "mass_list", "rho0", "rmax", "nodes", "tol", "hbar", "G", "unit_system"})
    add_flag(sweep, key, "");
  sweep->add_option_function<std::string>(
      "--mass-list", [&](const std::string& v) { flag_values["mass_list"] = v; }, "");

  auto* equivalence = app.add_subcommand("equivalence", "equivalence-principle check");
  for (const auto* key :
       {"g", "sigma0", "t_max", "levels", "nodes", "steps", "mass", "hbar", "G",
        "unit_system"})
    add_flag(equivalence, key, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    bg::RunConfig cfg;
    if (!config_path.empty()) cfg = bg::RunConfig::from_file(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::domain_error("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : flag_values) cfg.set(k, v);
    if (!out_dir.empty()) cfg.set("out", out_dir);

    if (app.got_subcommand(packet)) return run_packet(cfg);
    if (app.got_subcommand(critical)) return run_critical(cfg);
    if (app.got_subcommand(stationary)) return run_stationary(cfg);
    if (app.got_subcommand(evolve)) return run_evolve(cfg);
    if (app.got_subcommand(sweep)) return run_sweep(cfg);
    if (app.got_subcommand(equivalence)) return run_equivalence(cfg);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const bg::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
