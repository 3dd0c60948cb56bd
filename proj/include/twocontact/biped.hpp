#pragma once

// Geometry of the variable-structure biped: a beam carrying two legs and two
// heavy cylinders, standing on a slope. Lengths in m, masses in kg. x runs
// along the beam (downhill positive, origin at the beam centre), z normal to
// the slope from the contact line.

#include <array>
#include <vector>

#include "twocontact/model.hpp"

namespace twocontact {

struct BipedSpec {
  double beam_mass = 0.124;
  double beam_length = 0.50;
  double leg_mass = 0.040;
  double cylinder_mass = 0.195;
  double cylinder_radius = 0.02;
  double leg_spacing = 0.060;
  double leg_length = 0.110;
  double beam_offset = 0.0364;     // beam axis height above the top of the legs
  double leg1_position = 0.0;      // uphill leg, along the beam
  std::array<double, 2> cylinder_positions{-0.18377, 0.12242};
  double cylinder_offset = 0.0;    // cylinder centres above the beam axis
  double alpha = 25.0 * 3.14159265358979323846 / 180.0;
  double mu1 = 0.315;
  double mu2 = 1.0;
  double g = kStandardGravity;

  bool operator==(const BipedSpec&) const = default;
};

// A rigid part: mass, centre and moment of inertia about its own centre.
struct MassPart {
  double m = 0;
  double x = 0, z = 0;
  double inertia = 0;
};

struct MassProperties {
  double m = 0;
  double xc = 0, zc = 0;
  double rho = 0;  // radius of gyration about the centre of mass
};

MassProperties compose(const std::vector<MassPart>& parts);
std::vector<MassPart> biped_parts(const BipedSpec& spec);
MassProperties biped_mass_properties(const BipedSpec& spec);

// Throws InvalidConfiguration for non-positive masses or lengths.
Configuration biped_to_configuration(const BipedSpec& spec);

// Sweep grid: the downhill cylinder moves over `holes` positions spaced
// `hole_spacing` around its shifted base position, the legs take
// `leg_lengths`. The beam height follows the legs so the beam offset is
// preserved.
struct BipedGrid {
  int holes = 13;
  double hole_spacing = 0.010;
  double centre_shift = -0.065;  // shift of the middle hole from the base position
  std::vector<double> leg_lengths{0.085, 0.0975, 0.110, 0.1225, 0.135};
  int moving_cylinder = 1;
};

// Spec for grid cell (hole index, leg index); hole index 0 is furthest uphill.
BipedSpec grid_cell(const BipedSpec& base, const BipedGrid& grid, int hole, int leg);

}  // namespace twocontact
