#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bohmgrav {

enum class Geometry { radial3d, line1d };

/// Discretized sqrt(density) samples on a uniform grid.  For radial3d the
/// grid runs over radii r1 > 0 .. r_max and total_norm = \int 4 pi r^2 amp^2 dr
/// (the unsampled [0, r1] segment is closed with an even-quadratic
/// extrapolation).  For line1d the grid is an arbitrary uniform coordinate
/// axis and the measure is plain dx.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> amp;
  Geometry geometry = Geometry::radial3d;
  double total_norm = 0.0;

  std::size_t size() const { return r.size(); }
  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }

  /// Copy rescaled so total_norm becomes exactly 1.
  RadialProfile normalized() const;
};

/// Validate invariants (uniform spacing, amp >= 0, r1 > 0 for radial3d) and
/// fill in total_norm.
RadialProfile make_profile(std::vector<double> r, std::vector<double> amp,
                           Geometry geometry);

std::vector<double> uniform_grid(double first, double last, std::size_t nodes);

/// \int f dV with the geometry measure (4 pi r^2 dr or dx), including the
/// even-extrapolated [0, r1] closure for radial grids.
double volume_integral(const RadialProfile& p, std::span<const double> f);

/// Density at r = 0 by even-quadratic extrapolation of amp^2.
double central_density(const RadialProfile& p);

/// Radius where amp^2 first falls to half the central density, linearly
/// interpolated between grid nodes.
double profile_half_width(const RadialProfile& p);

}  // namespace bohmgrav
