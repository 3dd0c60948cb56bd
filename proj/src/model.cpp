#include "twocontact/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace twocontact {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::SingularMode: return "SingularMode";
    case ErrorKind::NoConsistentImpact: return "NoConsistentImpact";
    case ErrorKind::PainleveEncountered: return "PainleveEncountered";
    case ErrorKind::EventStall: return "EventStall";
    case ErrorKind::EventBudgetExceeded: return "EventBudgetExceeded";
    case ErrorKind::UnclassifiableEndpoint: return "UnclassifiableEndpoint";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Configuration Configuration::slope(double m, double rho, double h, double l1,
                                   double l2, double mu1, double mu2,
                                   double alpha, double g) {
  Configuration cfg;
  cfg.m = m;
  cfg.rho = rho;
  cfg.h = h;
  cfg.l1 = l1;
  cfg.l2 = l2;
  cfg.phi1 = 0;
  cfg.phi2 = 0;
  cfg.mu1 = mu1;
  cfg.mu2 = mu2;
  cfg.f_ex = m * g;
  cfg.alpha = alpha;
  cfg.tau_ex = 0;
  return cfg;
}

namespace {

// Rows of the contact Jacobian in body velocity space (dx, dz, dtheta).
struct Jacobian {
  Eigen::RowVector3d z[2];
  Eigen::RowVector3d x[2];
};

Jacobian contact_jacobian(const Configuration& cfg) {
  Jacobian J;
  const double phi[2] = {cfg.phi1, cfg.phi2};
  const double l[2] = {cfg.l1, cfg.l2};
  for (int i = 0; i < 2; ++i) {
    const double c = std::cos(phi[i]), s = std::sin(phi[i]);
    const double eta = l[i] * c - cfg.h * s;
    const double xi = cfg.h * c + l[i] * s;
    J.z[i] << -s, c, eta;
    J.x[i] << c, s, xi;
  }
  return J;
}

Eigen::Matrix3d generalized_jacobian(const Jacobian& J) {
  Eigen::Matrix3d Jq;
  Jq.row(0) = J.z[0];
  Jq.row(1) = J.z[1];
  Jq.row(2) = J.x[1];
  return Jq;
}

}  // namespace

void validate(const Configuration& cfg) {
  const double values[] = {cfg.m,    cfg.rho, cfg.h,   cfg.l1,
                           cfg.l2,   cfg.phi1, cfg.phi2, cfg.mu1,
                           cfg.mu2,  cfg.f_ex, cfg.alpha, cfg.tau_ex};
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidConfiguration,
                  "configuration contains a non-finite value");
    }
  }
  if (cfg.m <= 0) throw Error(ErrorKind::InvalidConfiguration, "mass must be positive");
  if (cfg.rho <= 0) {
    throw Error(ErrorKind::InvalidConfiguration,
                "radius of gyration must be positive");
  }
  if (cfg.mu1 < 0 || cfg.mu2 < 0) {
    throw Error(ErrorKind::InvalidConfiguration,
                "friction coefficients must be non-negative");
  }
  if (std::abs(std::cos(cfg.phi1)) < kTolGeom ||
      std::abs(std::cos(cfg.phi2)) < kTolGeom) {
    throw Error(ErrorKind::DegenerateGeometry,
                "contact normal perpendicular to the reference surface (cos phi = 0)");
  }
  if (cfg.phi1 == 0 && cfg.phi2 == 0 && !(cfg.l1 < cfg.l2)) {
    throw Error(ErrorKind::InvalidConfiguration,
                "contact points must satisfy l1 < l2");
  }
  const Jacobian J = contact_jacobian(cfg);
  const Eigen::Matrix3d Jq = generalized_jacobian(J);
  const double scale = 1.0 + std::max({std::abs(cfg.h), std::abs(cfg.l1),
                                       std::abs(cfg.l2)});
  if (std::abs(Jq.determinant()) < kTolGeom * scale) {
    throw Error(ErrorKind::DegenerateGeometry,
                "coordinates (z1, z2, x2) do not parametrize the body motion");
  }
  const Eigen::RowVector3d rate = J.x[0] * Jq.inverse();
  if (std::abs(rate[2]) < kTolGeom) {
    throw Error(ErrorKind::DegenerateGeometry,
                "two-contact slip does not move both contacts tangentially");
  }
}

char to_char(Letter l) noexcept {
  switch (l) {
    case Letter::F: return 'F';
    case Letter::S: return 'S';
    case Letter::P: return 'P';
    case Letter::N: return 'N';
  }
  return '?';
}

std::string ContactMode::name() const {
  return {to_char(first), to_char(second)};
}

std::optional<ContactMode> ContactMode::parse(std::string_view word) {
  if (word.size() != 2) return std::nullopt;
  auto letter = [](char c) -> std::optional<Letter> {
    switch (c) {
      case 'F': return Letter::F;
      case 'S': return Letter::S;
      case 'P': return Letter::P;
      case 'N': return Letter::N;
      default: return std::nullopt;
    }
  };
  auto a = letter(word[0]);
  auto b = letter(word[1]);
  if (!a || !b) return std::nullopt;
  return ContactMode{*a, *b};
}

std::array<ContactMode, 16> ContactMode::all() {
  constexpr Letter letters[] = {Letter::F, Letter::S, Letter::P, Letter::N};
  std::array<ContactMode, 16> out;
  int k = 0;
  for (Letter a : letters)
    for (Letter b : letters) out[k++] = ContactMode{a, b};
  return out;
}

bool ContactMode::is_double_slip() const {
  auto slip = [](Letter l) { return l == Letter::P || l == Letter::N; };
  return slip(first) && slip(second);
}

double ZodTableau::kinetic_energy(const Vec3& dq) const {
  Eigen::Matrix3d Wq;
  Wq.col(0) = B1z;
  Wq.col(1) = B2z;
  Wq.col(2) = Vec3(delassus(0, 3), delassus(2, 3), delassus(3, 3));
  return 0.5 * dq.dot(Wq.ldlt().solve(dq));
}

ZodTableau build_tableau(const Configuration& cfg) {
  validate(cfg);
  const Jacobian J = contact_jacobian(cfg);
  const Eigen::Matrix3d Minv =
      Eigen::Vector3d(1.0 / cfg.m, 1.0 / cfg.m, 1.0 / (cfg.m * cfg.rho * cfg.rho))
          .asDiagonal();

  Eigen::Matrix<double, 4, 3> Jc;
  Jc.row(0) = J.z[0];
  Jc.row(1) = J.x[0];
  Jc.row(2) = J.z[1];
  Jc.row(3) = J.x[1];

  const Vec3 wrench(cfg.f_ex * std::sin(cfg.alpha),
                    -cfg.f_ex * std::cos(cfg.alpha), cfg.tau_ex);

  ZodTableau tab;
  tab.m = cfg.m;
  tab.mu1 = cfg.mu1;
  tab.mu2 = cfg.mu2;
  tab.eta1 = J.z[0][2];
  tab.eta2 = J.z[1][2];
  tab.xi1 = J.x[0][2];
  tab.xi2 = J.x[1][2];
  tab.delassus = Jc * Minv * Jc.transpose();
  tab.load = Jc * Minv * wrench;
  tab.x1_rate = J.x[0] * generalized_jacobian(J).inverse();

  auto rows = [&](const Vec4& v) { return Vec3(v[0], v[2], v[3]); };
  tab.b_ex = rows(tab.load);
  tab.B1z = rows(tab.delassus.col(0));
  tab.B1x = rows(tab.delassus.col(1));
  tab.B2z = rows(tab.delassus.col(2));
  tab.B2x = rows(tab.delassus.col(3));
  tab.accel_scale = tab.load.norm() > 0 ? tab.load.norm() : 1.0;
  return tab;
}

ConeFit fit_friction_cones(const Vec4& f0, const Vec4& n, double mu1,
                           double mu2) {
  // Margins g_k(s) = p_k + q_k s; maximize min_k g_k.
  std::array<double, 6> p, q;
  const double mus[2] = {mu1, mu2};
  for (int i = 0; i < 2; ++i) {
    const int z = 2 * i, x = 2 * i + 1;
    p[3 * i] = f0[z];
    q[3 * i] = n[z];
    p[3 * i + 1] = mus[i] * f0[z] - f0[x];
    q[3 * i + 1] = mus[i] * n[z] - n[x];
    p[3 * i + 2] = mus[i] * f0[z] + f0[x];
    q[3 * i + 2] = mus[i] * n[z] + n[x];
  }
  auto worst = [&](double s) {
    double g = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) g = std::min(g, p[k] + q[k] * s);
    return g;
  };

  const double pscale = 1.0 + std::abs(f0.norm());
  const double qscale = n.norm() > 0 ? n.norm() : 1.0;
  std::vector<double> candidates{0.0};
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const double dq = q[a] - q[b];
      if (std::abs(dq) > 1e-14 * qscale) candidates.push_back((p[b] - p[a]) / dq);
    }
  }
  // Unbounded growth (wedging): cap the parameter far from the data.
  const bool up = std::all_of(q.begin(), q.end(), [&](double v) { return v > 1e-14 * qscale; });
  const bool down = std::all_of(q.begin(), q.end(), [&](double v) { return v < -1e-14 * qscale; });
  if (up) candidates.push_back(1e3 * pscale / qscale);
  if (down) candidates.push_back(-1e3 * pscale / qscale);

  double best_s = 0, best_g = worst(0.0);
  for (double s : candidates) {
    const double g = worst(s);
    if (g > best_g) best_g = g, best_s = s;
  }
  return {f0 + best_s * n, best_g};
}

ModeSolution mode_dynamics(const ZodTableau& tab, ContactMode mode) {
  Mat4 A = Mat4::Zero();
  Vec4 b = Vec4::Zero();
  int row = 0;
  for (int i = 0; i < 2; ++i) {
    const int z = 2 * i, x = 2 * i + 1;
    const double mu = tab.mu(i);
    switch (mode.at(i)) {
      case Letter::F:
        A(row, z) = 1;
        ++row;
        A(row, x) = 1;
        ++row;
        break;
      case Letter::S:
        A.row(row) = tab.delassus.row(z);
        b[row++] = -tab.load[z];
        A.row(row) = tab.delassus.row(x);
        b[row++] = -tab.load[x];
        break;
      case Letter::P:
      case Letter::N:
        A.row(row) = tab.delassus.row(z);
        b[row++] = -tab.load[z];
        A(row, x) = 1;
        A(row, z) = mode.at(i) == Letter::P ? mu : -mu;
        ++row;
        break;
    }
  }

  ModeSolution sol;
  sol.mode = mode;
  Vec4 f;
  Eigen::FullPivLU<Mat4> lu(A);
  lu.setThreshold(1e-12);
  if (lu.rank() == 4) {
    f = lu.solve(b);
  } else if (mode == ContactMode{Letter::S, Letter::S} && lu.rank() == 3) {
    const Vec4 f0 = A.completeOrthogonalDecomposition().solve(b);
    Vec4 n = lu.kernel().col(0);
    n.normalize();
    f = fit_friction_cones(f0, n, tab.mu1, tab.mu2).f;
    sol.indeterminate = true;
  } else {
    throw Error(ErrorKind::SingularMode,
                "contact mode " + mode.name() + " has a singular equality system");
  }

  for (int i = 0; i < 2; ++i) {
    if (mode.at(i) == Letter::F) f[2 * i] = f[2 * i + 1] = 0;
  }
  const Vec4 a = tab.load + tab.delassus * f;
  sol.f1z = f[0];
  sol.f1x = f[1];
  sol.f2z = f[2];
  sol.f2x = f[3];
  sol.qdd = Vec3(a[0], a[2], a[3]);
  sol.ddx1 = a[1];
  // Constrained components are zero by construction; drop the roundoff.
  for (int i = 0; i < 2; ++i) {
    if (mode.at(i) != Letter::F) sol.qdd[i] = 0;
  }
  if (mode.first == Letter::S) sol.ddx1 = 0;
  if (mode.second == Letter::S) sol.qdd[2] = 0;
  if (mode == ContactMode{Letter::S, Letter::S}) sol.qdd.setZero();
  return sol;
}

}  // namespace twocontact
