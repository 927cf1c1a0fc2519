#pragma once

namespace bohmgrav {

// CODATA 2018 recommended values, SI.
namespace codata2018 {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double G = 6.67430e-11;         // m^3 kg^-1 s^-2
}  // namespace codata2018

/// Physical constants plus the gravitational self-localization scales
/// derived from them:
///   length = hbar^2/(G m^3),  energy = G^2 m^5/hbar^2,  time = hbar^3/(G^2 m^5).
/// Immutable value type, freely shareable across threads.
struct PhysicalScales {
  double hbar = 1.0;
  double G = 1.0;
  double m = 1.0;
  double length_scale = 1.0;
  double energy_scale = 1.0;
  double time_scale = 1.0;

  double to_natural_length(double x) const { return x / length_scale; }
  double from_natural_length(double x) const { return x * length_scale; }
  double to_natural_energy(double e) const { return e / energy_scale; }
  double from_natural_energy(double e) const { return e * energy_scale; }
  double to_natural_time(double t) const { return t / time_scale; }
  double from_natural_time(double t) const { return t * time_scale; }
};

/// Build the derived scales for a particle of mass m.  All inputs must be
/// strictly positive and finite; violations raise std::domain_error naming
/// the offending field.
PhysicalScales gravitational_scales(double m, double hbar = 1.0, double G = 1.0);

}  // namespace bohmgrav
