#include "bohmgrav/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bohmgrav {

namespace {

void check_positive(double v, const char* field) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::domain_error(std::string("gravitational_scales: ") + field +
                            " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

PhysicalScales gravitational_scales(double m, double hbar, double G) {
  check_positive(m, "mass");
  check_positive(hbar, "hbar");
  check_positive(G, "G");

  PhysicalScales s;
  s.hbar = hbar;
  s.G = G;
  s.m = m;
  s.length_scale = hbar * hbar / (G * m * m * m);
  s.energy_scale = G * G * m * m * m * m * m / (hbar * hbar);
  s.time_scale = hbar / s.energy_scale;  // hbar^3/(G^2 m^5), exact product with energy
  return s;
}

}  // namespace bohmgrav
