#include "twocontact/biped.hpp"

#include <cmath>
#include <string>

namespace twocontact {

MassProperties compose(const std::vector<MassPart>& parts) {
  MassProperties p;
  for (const MassPart& q : parts) {
    p.m += q.m;
    p.xc += q.m * q.x;
    p.zc += q.m * q.z;
  }
  if (p.m <= 0) return p;
  p.xc /= p.m;
  p.zc /= p.m;
  double inertia = 0;
  for (const MassPart& q : parts) {
    const double dx = q.x - p.xc, dz = q.z - p.zc;
    inertia += q.inertia + q.m * (dx * dx + dz * dz);
  }
  p.rho = std::sqrt(inertia / p.m);
  return p;
}

std::vector<MassPart> biped_parts(const BipedSpec& s) {
  const double zb = s.leg_length + s.beam_offset;
  const double zc = zb + s.cylinder_offset;
  const double rod_leg = s.leg_mass * s.leg_length * s.leg_length / 12;
  const double disc = 0.5 * s.cylinder_mass * s.cylinder_radius * s.cylinder_radius;
  return {
      {s.beam_mass, 0.0, zb, s.beam_mass * s.beam_length * s.beam_length / 12},
      {s.leg_mass, s.leg1_position, 0.5 * s.leg_length, rod_leg},
      {s.leg_mass, s.leg1_position + s.leg_spacing, 0.5 * s.leg_length, rod_leg},
      {s.cylinder_mass, s.cylinder_positions[0], zc, disc},
      {s.cylinder_mass, s.cylinder_positions[1], zc, disc},
  };
}

MassProperties biped_mass_properties(const BipedSpec& spec) {
  return compose(biped_parts(spec));
}

Configuration biped_to_configuration(const BipedSpec& s) {
  const std::pair<const char*, double> positive[] = {
      {"beam_mass", s.beam_mass},         {"beam_length", s.beam_length},
      {"leg_mass", s.leg_mass},           {"cylinder_mass", s.cylinder_mass},
      {"leg_spacing", s.leg_spacing},     {"leg_length", s.leg_length},
  };
  for (const auto& [name, value] : positive) {
    if (!(value > 0) || !std::isfinite(value)) {
      throw Error(ErrorKind::InvalidConfiguration,
                  std::string(name) + " must be positive, got " + std::to_string(value));
    }
  }
  if (s.cylinder_radius < 0) {
    throw Error(ErrorKind::InvalidConfiguration, "cylinder_radius must be non-negative");
  }
  const MassProperties p = biped_mass_properties(s);
  Configuration cfg = Configuration::slope(p.m, p.rho, p.zc, s.leg1_position - p.xc,
                                           s.leg1_position + s.leg_spacing - p.xc, s.mu1,
                                           s.mu2, s.alpha, s.g);
  validate(cfg);
  return cfg;
}

BipedSpec grid_cell(const BipedSpec& base, const BipedGrid& grid, int hole, int leg) {
  BipedSpec s = base;
  const int centre = (grid.holes - 1) / 2;
  s.cylinder_positions[grid.moving_cylinder] += grid.centre_shift + (hole - centre) * grid.hole_spacing;
  s.leg_length = grid.leg_lengths.at(leg);
  return s;
}

}  // namespace twocontact
