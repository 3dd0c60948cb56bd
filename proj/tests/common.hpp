#pragma once

#include <cmath>
#include <random>
#include <string>

#include "twocontact/model.hpp"

namespace twocontact::testing {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg(double d) { return d * kPi / 180.0; }

inline Configuration config_A() {
  return Configuration::slope(0.594, 0.143, 0.1341, -0.0512, 0.1688, 0.315, 1.0, deg(25));
}
inline Configuration config_B() {
  return Configuration::slope(0.594, 0.1469, 0.1341, 0.0161, 0.0761, 0.315, 1.0, deg(25));
}
inline Configuration config_D() {
  return Configuration::slope(0.594, 0.1379, 0.1341, 0.0288, 0.0888, 0.315, 1.0, deg(25));
}

inline std::string config_path(const std::string& name) {
  return std::string(TWOCONTACT_CONFIG_DIR) + "/" + name;
}

// Random non-degenerate body with the contact normals tilted by up to 0.6 rad
// and a general load direction.
inline Configuration random_configuration(std::mt19937_64& rng, bool tilted = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Configuration c;
  c.m = 0.2 + 2.0 * u(rng);
  c.rho = 0.05 + 0.2 * u(rng);
  c.h = 0.03 + 0.2 * u(rng);
  c.l1 = -0.15 + 0.2 * u(rng);
  c.l2 = c.l1 + 0.03 + 0.2 * u(rng);
  c.phi1 = tilted ? -0.6 + 1.2 * u(rng) : 0.0;
  c.phi2 = tilted ? -0.6 + 1.2 * u(rng) : 0.0;
  c.mu1 = 0.1 + 1.2 * u(rng);
  c.mu2 = 0.1 + 1.2 * u(rng);
  c.f_ex = c.m * kStandardGravity * (0.5 + u(rng));
  c.alpha = deg(-35 + 70 * u(rng));
  c.tau_ex = tilted ? c.f_ex * c.rho * (-0.2 + 0.4 * u(rng)) : 0.0;
  return c;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

}  // namespace twocontact::testing
