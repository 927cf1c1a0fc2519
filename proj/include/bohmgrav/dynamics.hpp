#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bohmgrav/profile.hpp"
#include "bohmgrav/units.hpp"

namespace bohmgrav {

/// Time-stamped complex field on a fixed uniform grid.  line1d grids are
/// Cartesian (periodic split-step); radial3d grids run over r = h..r_max
/// with psi(r_max) pinned to zero (sine-transform kinetic step on r psi).
struct EvolutionState {
  double t = 0.0;
  std::vector<double> grid;
  std::vector<std::complex<double>> psi;
  Geometry geometry = Geometry::line1d;
  double norm = 0.0;
  double energy = 0.0;
};

/// Gaussian packet sampled on a uniform Cartesian grid [center - half_span,
/// center + half_span], normalized on the grid.
EvolutionState gaussian_state_1d(double sigma0, double u, double m, double hbar,
                                 double center, double half_span, std::size_t nodes);

/// Isotropic 3D Gaussian sampled on a radial grid r_i = i h, i = 1..nodes.
EvolutionState gaussian_state_radial(double sigma0, double r_max, std::size_t nodes);

/// State carrying a stationary profile (amp taken as the real field).
EvolutionState state_from_profile(const RadialProfile& profile);

struct EvolveOptions {
  double g = 0.0;               // uniform field: V = -m g x (line1d only)
  double m = 1.0;
  double hbar = 1.0;
  double leak_threshold = 1e-12;  // |psi| at the boundary that aborts the run
  std::size_t store_every = 1;    // keep every k-th step (first and last always)
};

/// Unitary split-step propagation (half potential, full kinetic, half
/// potential).  Norm drift is at rounding level per step.  Boundary
/// amplitude above leak_threshold aborts with NumericError.
std::vector<EvolutionState> evolve_free(const EvolutionState& psi0, double dt,
                                        std::size_t steps, const EvolveOptions& opt = {});

struct SnEvolveOptions {
  double leak_threshold = 1e-6;  // SN tails decay only exponentially
  std::size_t store_every = 1;
};

/// Self-gravitating split-step on a radial grid: the potential m phi is
/// refreshed from poisson_radial at the top of every step and held frozen
/// through the symmetric splitting.  Stored frames carry kinetic + pairwise
/// gravitational energy.
std::vector<EvolutionState> evolve_sn(const EvolutionState& psi0, double dt,
                                      std::size_t steps, const PhysicalScales& scales,
                                      const SnEvolveOptions& opt = {});

/// Measured r.m.s. width: sqrt(<x^2> - <x>^2) on line1d, sqrt(<r^2>/3)
/// radially.
double measured_width(const EvolutionState& state);
double measured_mean(const EvolutionState& state);

struct TrajectoryEnsemble {
  std::vector<double> seeds;               // positions drawn from |psi(.,0)|^2
  std::vector<double> times;               // stored frame times
  std::vector<std::vector<double>> paths;  // paths[seed][frame]
  std::vector<std::size_t> excluded;       // seeds that entered a node region
  std::uint64_t sampler_rng_seed = 0;
};

struct TrajectoryOptions {
  double node_floor = 1e-8;  // |psi| < floor * max|psi| flags the seed
};

/// Integrate dx/dt = (hbar/m) Im(dpsi/dx / psi) for n_seeds inverse-CDF
/// samples of the initial density; RK4 across stored frames with mid-step
/// time interpolation of the velocity field.
TrajectoryEnsemble bohmian_trajectories(std::span<const EvolutionState> states,
                                        std::size_t n_seeds, std::uint64_t rng_seed,
                                        double m = 1.0, double hbar = 1.0,
                                        const TrajectoryOptions& opt = {});

enum class TransformDirection { to_free, to_field };

/// Equivalence-principle phase map between the uniform-field and free-fall
/// wave functions:
///   to_free:  Psi = exp[(i m/hbar)(g^2 t^3/6 - x g t)] psi   (grid holds x)
///   to_field: psi = exp[(i m/hbar)(g^2 t^3/3 + X g t)] Psi   (grid holds X)
/// Pure phase: |output| = |input| pointwise.
std::vector<std::complex<double>> equivalence_transform(
    std::span<const std::complex<double>> field, std::span<const double> grid, double g,
    double t, TransformDirection direction, double m = 1.0, double hbar = 1.0);

struct ForceBalanceReport {
  std::vector<double> r;
  std::vector<double> f_q;                  // -dQ/dr
  std::vector<double> f_g;                  // -d(m phi)/dr
  std::vector<double> imbalance_physical;   // f_q + f_g
  std::vector<double> imbalance_literal;    // f_q - f_g (paper sign convention)
  std::size_t window_begin = 0;             // amp >= floor * max(amp)
  std::size_t window_end = 0;               // one past the last window index
  double max_physical = 0.0, max_literal = 0.0;
  double min_physical = 0.0, r_min_physical = 0.0;
  double min_literal = 0.0, r_min_literal = 0.0;
};

/// Pointwise quantum vs. self-gravity force comparison on a radial state,
/// reported in both sign conventions over the window amp >= floor_frac max.
ForceBalanceReport force_balance_scan(const EvolutionState& state,
                                      const PhysicalScales& scales,
                                      double floor_frac = 1e-3);

}  // namespace bohmgrav
