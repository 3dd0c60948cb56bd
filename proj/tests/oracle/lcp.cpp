#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "oracle.hpp"

namespace twocontact::oracle {

namespace {

constexpr TangentialRegime kRegimes[] = {TangentialRegime::Stick, TangentialRegime::SlipPos,
                                         TangentialRegime::SlipNeg};

int sign_of(TangentialRegime r) {
  return r == TangentialRegime::SlipPos ? 1 : r == TangentialRegime::SlipNeg ? -1 : 0;
}

int regime_index(TangentialRegime r) {
  return r == TangentialRegime::Stick ? 0 : r == TangentialRegime::SlipPos ? 1 : 2;
}

std::optional<LcpSolution> solve_candidate(const Mat3& Minv, const Vec3& u, const ContactRows& rows,
                                           const std::array<bool, 2>& touching,
                                           const LcpCandidate& cand, double tol_rel) {
  std::vector<int> act;
  for (int i = 0; i < 2; ++i) {
    if (cand.active[i]) act.push_back(i);
  }
  const int k = static_cast<int>(act.size());
  const int n = 2 * k;

  // Columns: Pn, Pt per active contact. Each column maps to a body velocity
  // change Minv * row^T.
  std::vector<Vec3> col(n);
  for (int a = 0; a < k; ++a) {
    col[2 * a] = Minv * rows.n[act[a]].transpose();
    col[2 * a + 1] = Minv * rows.t[act[a]].transpose();
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < k; ++a) {
    const int i = act[a];
    for (int c = 0; c < n; ++c) A(2 * a, c) = rows.n[i].dot(col[c]);
    b[2 * a] = -rows.n[i].dot(u);
    if (cand.regime[i] == TangentialRegime::Stick) {
      for (int c = 0; c < n; ++c) A(2 * a + 1, c) = rows.t[i].dot(col[c]);
      b[2 * a + 1] = -rows.t[i].dot(u);
    } else {
      A(2 * a + 1, 2 * a + 1) = 1;
      A(2 * a + 1, 2 * a) = sign_of(cand.regime[i]) * rows.mu[i];
    }
  }

  double vscale = 0;
  for (int i = 0; i < 2; ++i) {
    vscale = std::max({vscale, std::abs(rows.n[i].dot(u)), std::abs(rows.t[i].dot(u))});
  }
  vscale = std::max(vscale, 1e-300);
  const double mass = 1.0 / Minv(0, 0);
  const double tol_v = tol_rel * vscale;
  const double tol_j = tol_rel * mass * vscale;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-12);
  Eigen::VectorXd P;
  bool indeterminate = false;
  if (lu.rank() == n) {
    P = lu.solve(b);
  } else {
    const bool both_stick = k == 2 && cand.regime[0] == TangentialRegime::Stick &&
                            cand.regime[1] == TangentialRegime::Stick;
    if (!both_stick || lu.rank() != n - 1) return std::nullopt;
    const Eigen::VectorXd p0 = A.completeOrthogonalDecomposition().solve(b);
    if ((A * p0 - b).norm() > 1e-9 * std::max(b.norm(), 1e-300)) return std::nullopt;
    Eigen::VectorXd d = lu.kernel().col(0);
    d.normalize();
    // Cone constraints along p0 + s d: a + c s >= -tol.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto add = [&](double a, double c) {
      if (std::abs(c) < 1e-300) {
        if (a < -tol_j) lo = std::numeric_limits<double>::infinity();
        return;
      }
      const double s = (-tol_j - a) / c;
      if (c > 0) {
        lo = std::max(lo, s);
      } else {
        hi = std::min(hi, s);
      }
    };
    for (int a = 0; a < 2; ++a) {
      const double mu = rows.mu[act[a]];
      add(p0[2 * a], d[2 * a]);
      add(mu * p0[2 * a] - p0[2 * a + 1], mu * d[2 * a] - d[2 * a + 1]);
      add(mu * p0[2 * a] + p0[2 * a + 1], mu * d[2 * a] + d[2 * a + 1]);
    }
    if (lo > hi) return std::nullopt;
    const double s = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                     : std::isfinite(lo)                    ? lo
                     : std::isfinite(hi)                    ? hi
                                                            : 0.0;
    P = p0 + s * d;
    indeterminate = true;
  }
  if (!P.allFinite()) return std::nullopt;

  LcpSolution sol;
  sol.cand = cand;
  sol.indeterminate = indeterminate;
  sol.u_post = u;
  for (int c = 0; c < n; ++c) sol.u_post += P[c] * col[c];
  for (int a = 0; a < k; ++a) {
    sol.impulse[2 * act[a]] = P[2 * a];
    sol.impulse[2 * act[a] + 1] = P[2 * a + 1];
  }
  for (int i = 0; i < 2; ++i) {
    const double vn = rows.n[i].dot(sol.u_post);
    const double vt = rows.t[i].dot(sol.u_post);
    if (cand.active[i]) {
      const double pn = sol.impulse[2 * i], pt = sol.impulse[2 * i + 1];
      if (pn < -tol_j) return std::nullopt;
      if (cand.regime[i] == TangentialRegime::Stick) {
        if (std::abs(pt) > rows.mu[i] * pn + tol_j) return std::nullopt;
      } else if (sign_of(cand.regime[i]) * vt <= tol_v) {
        return std::nullopt;
      }
    } else if (touching[i] && vn < -tol_v) {
      return std::nullopt;
    }
  }
  return sol;
}

}  // namespace

std::vector<LcpSolution> enumerate_solutions(const Mat3& Minv, const Vec3& u,
                                             const ContactRows& rows,
                                             const std::array<bool, 2>& touching,
                                             double tol_rel) {
  std::vector<LcpSolution> out;
  const std::array<std::array<bool, 2>, 3> sets{{{true, true}, {true, false}, {false, true}}};
  for (const auto& set : sets) {
    if ((set[0] && !touching[0]) || (set[1] && !touching[1])) continue;
    for (TangentialRegime r0 : kRegimes) {
      for (TangentialRegime r1 : kRegimes) {
        if (!set[0] && r0 != TangentialRegime::Stick) continue;
        if (!set[1] && r1 != TangentialRegime::Stick) continue;
        LcpCandidate c;
        c.active = set;
        c.regime = {r0, r1};
        if (auto s = solve_candidate(Minv, u, rows, touching, c, tol_rel)) out.push_back(*s);
      }
    }
  }
  return out;
}

// --- Body -------------------------------------------------------------------

Body::Body(const Configuration& cfg) : cfg_(cfg) {
  const double l[2] = {cfg.l1, cfg.l2};
  const double phi[2] = {cfg.phi1, cfg.phi2};
  for (int i = 0; i < 2; ++i) {
    r_[i] = {l[i], -cfg.h};
    nrm_[i] = {-std::sin(phi[i]), std::cos(phi[i])};
    tan_[i] = {std::cos(phi[i]), std::sin(phi[i])};
  }
}

Mat3 Body::inverse_mass() const {
  return Vec3(1 / cfg_.m, 1 / cfg_.m, 1 / (cfg_.m * cfg_.rho * cfg_.rho)).asDiagonal();
}

Vec3 Body::applied_force() const {
  return {cfg_.f_ex * std::sin(cfg_.alpha), -cfg_.f_ex * std::cos(cfg_.alpha), cfg_.tau_ex};
}

namespace {
Eigen::Vector2d rotate(double th, const Eigen::Vector2d& r) {
  const double c = std::cos(th), s = std::sin(th);
  return {c * r.x() - s * r.y(), s * r.x() + c * r.y()};
}
Eigen::Vector2d rotate_rate(double th, const Eigen::Vector2d& r) {
  const double c = std::cos(th), s = std::sin(th);
  return {-s * r.x() - c * r.y(), c * r.x() - s * r.y()};
}
}  // namespace

double Body::gap(const Vec3& Q, int i) const {
  const Eigen::Vector2d p = Eigen::Vector2d(Q[0], Q[1]) + rotate(Q[2], r_[i]) - r_[i];
  return nrm_[i].dot(p);
}

double Body::slide(const Vec3& Q, int i) const {
  const Eigen::Vector2d p = Eigen::Vector2d(Q[0], Q[1]) + rotate(Q[2], r_[i]) - r_[i];
  return tan_[i].dot(p);
}

ContactRows Body::rows(const Vec3& Q) const {
  ContactRows out;
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector2d w = rotate_rate(Q[2], r_[i]);
    out.n[i] = Row3(nrm_[i].x(), nrm_[i].y(), nrm_[i].dot(w));
    out.t[i] = Row3(tan_[i].x(), tan_[i].y(), tan_[i].dot(w));
  }
  out.mu = {cfg_.mu1, cfg_.mu2};
  return out;
}

Mat3 Body::generalized_jacobian(const Vec3& Q) const {
  const ContactRows r = rows(Q);
  Mat3 J;
  J.row(0) = r.n[0];
  J.row(1) = r.n[1];
  J.row(2) = r.t[1];
  return J;
}

// --- Brute-force impact ---------------------------------------------------------

std::optional<BruteImpact> brute_force_impact(const Configuration& cfg, const Vec3& dq_pre,
                                              const std::array<bool, 2>& touching) {
  const Body body(cfg);
  const Mat3 Jq = body.generalized_jacobian(Vec3::Zero());
  const Vec3 u = Jq.fullPivLu().solve(dq_pre);
  const std::vector<LcpSolution> sols =
      enumerate_solutions(body.inverse_mass(), u, body.rows(Vec3::Zero()), touching);
  if (sols.empty()) return std::nullopt;

  // Single impacts: the faster approaching contact first, ties to contact 1.
  const int first_single = dq_pre[1] < dq_pre[0] ? 1 : 0;
  auto key = [&](const LcpSolution& s) {
    const bool both = s.cand.active[0] && s.cand.active[1];
    int slipping = 0;
    for (int i = 0; i < 2; ++i) {
      slipping += s.cand.active[i] && s.cand.regime[i] != TangentialRegime::Stick;
    }
    const int single = both ? 0 : (s.cand.active[first_single] ? 0 : 1);
    return std::make_tuple(both ? 0 : 1, both ? slipping : 0, single,
                           regime_index(s.cand.regime[0]), regime_index(s.cand.regime[1]));
  };
  const auto best = std::min_element(sols.begin(), sols.end(),
                                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
  BruteImpact out;
  out.best = *best;
  out.post_velocities = Jq * best->u_post;
  out.satisfied = static_cast<int>(sols.size());
  return out;
}

double body_kinetic_energy(const Configuration& cfg, const Vec3& dq) {
  const Body body(cfg);
  const Vec3 u = body.generalized_jacobian(Vec3::Zero()).fullPivLu().solve(dq);
  const Vec3 M(cfg.m, cfg.m, cfg.m * cfg.rho * cfg.rho);
  return 0.5 * u.dot(M.cwiseProduct(u));
}

}  // namespace twocontact::oracle
