#pragma once

// Planar rigid body resting on two unilateral frictional point contacts.
//
// Generalized coordinates q = (z1, z2, x2): normal displacements of both
// contact points and the tangential displacement of contact 2, all measured
// from the equilibrium posture. Under the zero-order dynamics (ZOD) every
// acceleration is evaluated at q = dq = 0, so each contact mode has constant
// accelerations and contact forces.
//
// Sign conventions (slope case, phi1 = phi2 = 0):
//
//            CoM
//             o        z (normal, away from the surface)
//             |  h     ^
//   ----p1----+----p2--+--> x (tangential, downhill)
//       <-l1-> <-l2->
//
// l_i is the signed tangential position of contact i relative to the CoM and
// h the CoM height above the contact line. The external force of magnitude
// f_ex acts along (sin alpha, -cos alpha) in the (x, z) frame, so alpha is the
// slope angle when f_ex = m g.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "twocontact/error.hpp"

namespace twocontact {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kStandardGravity = 9.81;
inline constexpr double kTolGeom = 1e-6;
inline constexpr double kTolPen = 1e-9;

struct Configuration {
  double m = 1.0;
  double rho = 0.1;
  double h = 0.1;
  double l1 = -0.05;
  double l2 = 0.05;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double mu1 = 0.5;
  double mu2 = 0.5;
  double f_ex = kStandardGravity;
  double alpha = 0.0;
  double tau_ex = 0.0;

  // Body on an incline under gravity: phi1 = phi2 = 0, tau_ex = 0.
  static Configuration slope(double m, double rho, double h, double l1,
                             double l2, double mu1, double mu2, double alpha,
                             double g = kStandardGravity);

  double mu(int contact) const { return contact == 0 ? mu1 : mu2; }

  bool operator==(const Configuration&) const = default;
};

// Throws Error{InvalidConfiguration} or Error{DegenerateGeometry}.
void validate(const Configuration& cfg);

struct ContactState {
  double z1 = 0, z2 = 0, x2 = 0;
  double dz1 = 0, dz2 = 0, dx2 = 0;
  double t = 0;

  Vec3 q() const { return {z1, z2, x2}; }
  Vec3 dq() const { return {dz1, dz2, dx2}; }
  void set(const Vec3& pos, const Vec3& vel) {
    z1 = pos[0], z2 = pos[1], x2 = pos[2];
    dz1 = vel[0], dz2 = vel[1], dx2 = vel[2];
  }
};

enum class Letter : std::uint8_t { F, S, P, N };

char to_char(Letter l) noexcept;

struct ContactMode {
  Letter first = Letter::S;
  Letter second = Letter::S;

  Letter at(int contact) const { return contact == 0 ? first : second; }
  std::string name() const;
  static std::optional<ContactMode> parse(std::string_view word);
  static std::array<ContactMode, 16> all();

  bool is_double_slip() const;

  bool operator==(const ContactMode&) const = default;
};

// Constant coefficients of the ZOD: m*ddq = f_ex*(...) + rho^-2 tau_ex*(...)
// + sum_i f_iz*(...) + sum_i f_ix*(...), stored already divided by m.
//
// The same operator is kept in contact space (z1, x1, z2, x2) as the Delassus
// matrix W = J M^-1 J^T with load vector a_ex, so that a = a_ex + W f.
struct ZodTableau {
  Vec3 b_ex;
  Vec3 B1z, B2z, B1x, B2x;
  double eta1 = 0, eta2 = 0, xi1 = 0, xi2 = 0;
  double m = 1;
  double mu1 = 0, mu2 = 0;

  Mat4 delassus;
  Vec4 load;
  // dx1 = x1_rate . dq (rigid-body kinematics linearized at the equilibrium).
  Eigen::RowVector3d x1_rate;
  // Characteristic acceleration |a_ex|, used to scale force tolerances.
  double accel_scale = 1;

  double mu(int contact) const { return contact == 0 ? mu1 : mu2; }
  double force_scale() const { return m * accel_scale; }

  // Contact-space velocity (dz1, dx1, dz2, dx2) of a generalized velocity.
  Vec4 contact_velocity(const Vec3& dq) const {
    return {dq[0], x1_rate.dot(dq), dq[1], dq[2]};
  }
  // Inverse of the contact_velocity restriction: (dz1, dz2, dx2) rows.
  static Vec3 generalized(const Vec4& v) { return {v[0], v[2], v[3]}; }

  // Kinetic energy 1/2 dq^T (W_q)^-1 dq with W_q the (z1, z2, x2) block of W.
  double kinetic_energy(const Vec3& dq) const;
};

ZodTableau build_tableau(const Configuration& cfg);

struct ModeSolution {
  ContactMode mode;
  Vec3 qdd = Vec3::Zero();  // (ddz1, ddz2, ddx2)
  double ddx1 = 0;
  double f1z = 0, f1x = 0, f2z = 0, f2x = 0;
  bool consistent = false;
  bool marginal = false;
  // Smallest normalized inequality margin (filled by the consistency check).
  double margin = 0;
  // SS only: forces are determined up to a null-space direction; the returned
  // forces maximize the smallest friction-cone margin.
  bool indeterminate = false;

  Vec4 forces() const { return {f1z, f1x, f2z, f2x}; }
  double fz(int contact) const { return contact == 0 ? f1z : f2z; }
  double fx(int contact) const { return contact == 0 ? f1x : f2x; }
  double ddz(int contact) const { return qdd[contact]; }
  double ddx(int contact) const { return contact == 0 ? ddx1 : qdd[2]; }
};

// Throws Error{SingularMode} when the mode's equality system is singular
// (other than the statically indeterminate SS family).
ModeSolution mode_dynamics(const ZodTableau& tab, ContactMode mode);

// Best point of a one-parameter force family f0 + s*n with respect to the
// friction cones of both contacts. Returns the forces and the smallest cone
// margin (unnormalized). Shared by SS and the sticking double impact.
struct ConeFit {
  Vec4 f;
  double margin;
};
ConeFit fit_friction_cones(const Vec4& f0, const Vec4& n, double mu1,
                           double mu2);

}  // namespace twocontact
