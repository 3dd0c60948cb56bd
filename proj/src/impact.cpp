#include "twocontact/impact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twocontact {

const char* to_string(TangentialRegime r) noexcept {
  switch (r) {
    case TangentialRegime::Stick: return "Stick";
    case TangentialRegime::SlipPos: return "SlipPos";
    case TangentialRegime::SlipNeg: return "SlipNeg";
  }
  return "?";
}

namespace {

constexpr TangentialRegime kRegimes[] = {
    TangentialRegime::Stick, TangentialRegime::SlipPos, TangentialRegime::SlipNeg};

int slip_sign(TangentialRegime r) {
  return r == TangentialRegime::SlipPos ? 1 : r == TangentialRegime::SlipNeg ? -1 : 0;
}

}  // namespace

std::vector<ImpactCandidate> preference_order(const std::array<bool, 2>& touching,
                                              const Vec3& dq_pre) {
  std::vector<ImpactCandidate> out;
  if (touching[0] && touching[1]) {
    for (int slipping = 0; slipping <= 2; ++slipping) {
      for (TangentialRegime a : kRegimes) {
        for (TangentialRegime b : kRegimes) {
          const int n = (a != TangentialRegime::Stick) + (b != TangentialRegime::Stick);
          if (n != slipping) continue;
          out.push_back({{true, true}, {a, b}});
        }
      }
    }
  }
  std::array<int, 2> order{0, 1};
  if (dq_pre[1] < dq_pre[0]) order = {1, 0};
  for (int i : order) {
    if (!touching[i]) continue;
    for (TangentialRegime r : kRegimes) {
      ImpactCandidate c;
      c.active[i] = true;
      c.regime[i] = r;
      out.push_back(c);
    }
  }
  return out;
}

std::optional<ImpactOutcome> evaluate_candidate(const ZodTableau& tab,
                                                const Vec3& dq_pre,
                                                const std::array<bool, 2>& touching,
                                                const ImpactCandidate& cand,
                                                const ImpactOptions& opts) {
  const Vec4 v = tab.contact_velocity(dq_pre);
  const double vscale = std::max(v.norm(), 1e-300);
  const double tol_v = opts.tol_rel * vscale;
  const double tol_j = opts.tol_rel * tab.m * vscale;

  Mat4 A = Mat4::Zero();
  Vec4 b = Vec4::Zero();
  for (int i = 0; i < 2; ++i) {
    const int z = 2 * i, x = 2 * i + 1;
    if (!cand.active[i]) {
      A(z, z) = 1;
      A(x, x) = 1;
      continue;
    }
    A.row(z) = tab.delassus.row(z);
    b[z] = -v[z];
    if (cand.regime[i] == TangentialRegime::Stick) {
      A.row(x) = tab.delassus.row(x);
      b[x] = -v[x];
    } else {
      A(x, x) = 1;
      A(x, z) = slip_sign(cand.regime[i]) * tab.mu(i);
    }
  }

  Vec4 j;
  Eigen::FullPivLU<Mat4> lu(A);
  lu.setThreshold(1e-12);
  const bool both_stick = cand.active[0] && cand.active[1] &&
                          cand.regime[0] == TangentialRegime::Stick &&
                          cand.regime[1] == TangentialRegime::Stick;
  if (lu.rank() == 4) {
    j = lu.solve(b);
  } else if (both_stick && lu.rank() == 3) {
    const Vec4 j0 = A.completeOrthogonalDecomposition().solve(b);
    Vec4 n = lu.kernel().col(0);
    n.normalize();
    j = fit_friction_cones(j0, n, tab.mu1, tab.mu2).f;
  } else {
    return std::nullopt;
  }

  if (!j.allFinite()) return std::nullopt;
  for (int i = 0; i < 2; ++i) {
    if (!cand.active[i]) j[2 * i] = j[2 * i + 1] = 0;
  }
  Vec4 vp = v + tab.delassus * j;
  for (int i = 0; i < 2; ++i) {
    const int z = 2 * i, x = 2 * i + 1;
    if (cand.active[i]) {
      if (j[z] < -tol_j) return std::nullopt;
      if (cand.regime[i] == TangentialRegime::Stick) {
        if (std::abs(j[x]) > tab.mu(i) * j[z] + tol_j) return std::nullopt;
      } else if (slip_sign(cand.regime[i]) * vp[x] <= tol_v) {
        return std::nullopt;
      }
    } else if (touching[i] && vp[z] < -tol_v) {
      return std::nullopt;
    }
  }
  ImpactOutcome out;
  out.impact = true;
  out.candidate = cand;
  out.impulses = j;
  for (int i = 0; i < 2; ++i) {
    if (!cand.active[i]) continue;
    vp[2 * i] = 0;
    if (cand.regime[i] == TangentialRegime::Stick) vp[2 * i + 1] = 0;
  }
  Vec3 dq = ZodTableau::generalized(vp);
  if (both_stick) {
    dq.setZero();
  } else if (cand.active[0] && cand.regime[0] == TangentialRegime::Stick) {
    // dx1 = 0 fixes dx2 given the normal velocities.
    dq[2] = -(tab.x1_rate[0] * dq[0] + tab.x1_rate[1] * dq[1]) / tab.x1_rate[2];
  }
  for (int i = 0; i < 2; ++i) {
    if (touching[i] && !cand.active[i] && std::abs(dq[i]) <= tol_v) dq[i] = 0;
  }
  out.post_velocities = dq;
  if (cand.active[0] && cand.active[1] &&
      cand.regime[0] != TangentialRegime::Stick &&
      cand.regime[1] != TangentialRegime::Stick) {
    out.slippingDouble = true;
    out.slipSign = dq[2] > 0 ? 1 : -1;
  }
  return out;
}

ImpactOutcome resolve_impact(const ZodTableau& tab, const Vec3& dq_pre,
                             const std::array<bool, 2>& touching,
                             const ImpactOptions& opts) {
  bool approaching = false;
  for (int i = 0; i < 2; ++i) {
    if (touching[i] && dq_pre[i] <= -opts.tol_graze) approaching = true;
  }
  if (!approaching) {
    ImpactOutcome out;
    out.post_velocities = dq_pre;
    for (int i = 0; i < 2; ++i) {
      if (touching[i] && dq_pre[i] < 0) out.post_velocities[i] = 0;
    }
    return out;
  }

  const auto order = preference_order(touching, dq_pre);
  std::optional<ImpactOutcome> best;
  int satisfied = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto res = evaluate_candidate(tab, dq_pre, touching, order[k], opts);
    if (!res) continue;
    ++satisfied;
    if (!best) {
      best = std::move(res);
      best->rank = static_cast<int>(k);
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no candidate satisfies the impact law for dq- = (" << dq_pre[0]
        << ", " << dq_pre[1] << ", " << dq_pre[2] << "), touching = ("
        << touching[0] << ", " << touching[1] << ")";
    throw Error(ErrorKind::NoConsistentImpact, msg.str());
  }
  best->satisfied = satisfied;
  return *best;
}

ImpactOutcome resolve_impact(const ZodTableau& tab, const ContactState& pre,
                             const ImpactOptions& opts) {
  return resolve_impact(tab, pre.dq(), {pre.z1 <= kTolPen, pre.z2 <= kTolPen}, opts);
}

double energy_balance(const ZodTableau& tab, const ContactState& pre,
                      const ImpactOutcome& out) {
  return tab.kinetic_energy(pre.dq()) - tab.kinetic_energy(out.post_velocities);
}

}  // namespace twocontact
