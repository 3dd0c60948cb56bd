#include "twocontact/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twocontact {

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

// Slip sign at each contact implied by a qualitative state (0 when the
// contact is not resting).
std::array<int, 2> contact_slip_signs(const ZodTableau& tab,
                                      const QualitativeState& qs) {
  const bool r1 = qs.contact1 == ContactStatus::TouchingResting;
  const bool r2 = qs.contact2 == ContactStatus::TouchingResting;
  if (r1 && r2) {
    return {sign_of(tab.x1_rate[2]) * qs.slip_sign, qs.slip_sign};
  }
  return {r1 ? qs.slip_sign : 0, r2 ? qs.slip_sign : 0};
}

}  // namespace

std::vector<QualitativeState> non_static_states() {
  using CS = ContactStatus;
  std::vector<QualitativeState> out;
  out.push_back({CS::Separated, CS::Separated, 0});
  for (int s : {-1, 0, 1}) out.push_back({CS::TouchingResting, CS::Separated, s});
  for (int s : {-1, 0, 1}) out.push_back({CS::Separated, CS::TouchingResting, s});
  for (int s : {-1, 1}) out.push_back({CS::TouchingResting, CS::TouchingResting, s});
  return out;
}

bool is_admissible(const ZodTableau& tab, ContactMode mode) {
  const Letter a = mode.first, b = mode.second;
  if (a == Letter::F || b == Letter::F) return true;
  if (a == Letter::S && b == Letter::S) return true;
  if (a == Letter::S || b == Letter::S) return false;
  // Both slipping: dx1 = x1_rate[2] * dx2 when both contacts are sustained.
  const int s1 = a == Letter::P ? 1 : -1;
  const int s2 = b == Letter::P ? 1 : -1;
  return s1 == sign_of(tab.x1_rate[2]) * s2;
}

std::vector<ContactMode> admissible_modes(const ZodTableau& tab) {
  std::vector<ContactMode> out;
  for (ContactMode m : ContactMode::all()) {
    if (is_admissible(tab, m)) out.push_back(m);
  }
  return out;
}

std::vector<ContactMode> admissible_modes(const Configuration& cfg) {
  return admissible_modes(build_tableau(cfg));
}

ModeCheck check_mode(const ZodTableau& tab, ContactMode mode,
                     const QualitativeState& qs, double tol) {
  ModeCheck out;
  const auto slips = contact_slip_signs(tab, qs);
  for (int i = 0; i < 2; ++i) {
    const ContactStatus st = qs.at(i);
    const Letter l = mode.at(i);
    if (st == ContactStatus::TouchingApproaching) return out;
    if (st == ContactStatus::Separated && l != Letter::F) return out;
    if (st == ContactStatus::TouchingResting) {
      if (l == Letter::S && slips[i] != 0) return out;
      if (l == Letter::P && slips[i] < 0) return out;
      if (l == Letter::N && slips[i] > 0) return out;
    }
  }
  out.compatible = true;
  try {
    out.solution = mode_dynamics(tab, mode);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMode) throw;
    out.compatible = false;
    return out;
  }

  const ModeSolution& s = out.solution;
  const double fs = tab.force_scale();
  const double as = tab.accel_scale;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    if (qs.at(i) != ContactStatus::TouchingResting) continue;
    const double fz = s.fz(i), fx = s.fx(i);
    switch (mode.at(i)) {
      case Letter::F:
        margin = std::min(margin, s.ddz(i) / as);
        break;
      case Letter::S:
        margin = std::min(margin, fz / fs);
        margin = std::min(margin, (tab.mu(i) * fz - std::abs(fx)) / fs);
        break;
      case Letter::P:
      case Letter::N: {
        margin = std::min(margin, fz / fs);
        if (slips[i] == 0) {
          const double dir = mode.at(i) == Letter::P ? 1.0 : -1.0;
          margin = std::min(margin, dir * s.ddx(i) / as);
        }
        break;
      }
    }
  }
  if (!std::isfinite(margin)) margin = 1.0;  // nothing to check (all free)
  out.margin = margin;
  out.consistent = margin > tol;
  out.marginal = std::abs(margin) <= tol;
  out.solution.consistent = out.consistent;
  out.solution.marginal = out.marginal;
  out.solution.margin = margin;
  return out;
}

ConsistencyReport consistency_report(const ZodTableau& tab,
                                     const QualitativeState& qs, double tol) {
  ConsistencyReport rep;
  rep.min_abs_margin = std::numeric_limits<double>::infinity();
  for (ContactMode m : admissible_modes(tab)) {
    ModeCheck c = check_mode(tab, m, qs, tol);
    if (!c.compatible) continue;
    rep.min_abs_margin = std::min(rep.min_abs_margin, std::abs(c.margin));
    if (c.consistent) rep.consistent.push_back(c.solution);
    if (c.marginal) rep.marginal.push_back(c.solution);
  }
  return rep;
}

std::vector<ModeSolution> consistent_modes(const ZodTableau& tab,
                                           const QualitativeState& qs) {
  return consistency_report(tab, qs).consistent;
}

std::vector<ModeSolution> consistent_modes(const ZodTableau& tab,
                                           const Configuration& cfg,
                                           const QualitativeState& qs) {
  (void)cfg;  // mu and geometry already live in the tableau
  return consistent_modes(tab, qs);
}

namespace {

EquilibriumClass classify(const Configuration& cfg,
                          const SlipDirectionEvidence* evidence) {
  const ZodTableau tab = build_tableau(cfg);
  EquilibriumClass eq;
  double min_margin = std::numeric_limits<double>::infinity();
  bool marginal = false;

  const ConsistencyReport rest = consistency_report(tab, QualitativeState{});
  min_margin = std::min(min_margin, rest.min_abs_margin);
  marginal = marginal || !rest.marginal.empty();
  const ContactMode ss{Letter::S, Letter::S};
  for (const ModeSolution& s : rest.consistent) {
    if (s.mode == ss) {
      eq.isEquilibrium = true;
    } else if (!eq.ambiguityWitness) {
      eq.ambiguityWitness = s.mode;
    }
  }
  eq.isAmbiguous = eq.isEquilibrium && eq.ambiguityWitness.has_value();
  if (!eq.isAmbiguous) eq.ambiguityWitness.reset();

  eq.isPainleveFree = true;
  for (const QualitativeState& qs : non_static_states()) {
    const ConsistencyReport rep = consistency_report(tab, qs);
    min_margin = std::min(min_margin, rep.min_abs_margin);
    marginal = marginal || !rep.marginal.empty();
    if (rep.consistent.size() != 1) eq.isPainleveFree = false;
    if (qs.contact1 == ContactStatus::TouchingResting &&
        qs.contact2 == ContactStatus::TouchingResting) {
      const int dir = qs.slip_sign > 0 ? 1 : 0;
      if (rep.consistent.size() == 1 && rep.consistent[0].mode.is_double_slip()) {
        eq.double_slip_sustained[dir] = true;
        eq.double_slip_mode[dir] = rep.consistent[0].mode;
      }
    }
  }

  const bool unambiguous_eq = eq.isEquilibrium && !eq.isAmbiguous;
  eq.isPersistent = unambiguous_eq && eq.double_slip_sustained[0] &&
                    eq.double_slip_sustained[1];
  bool weak = unambiguous_eq;
  for (int dir = 0; dir < 2; ++dir) {
    bool cond2 = false;
    if (evidence) {
      cond2 = evidence->endpoint_not_attractive[dir] &&
              evidence->no_slipping_double_impact[dir];
    }
    weak = weak && (eq.double_slip_sustained[dir] || cond2);
  }
  eq.isWeaklyPersistent = weak;
  eq.marginal = marginal;
  eq.margin = min_margin;
  return eq;
}

}  // namespace

EquilibriumClass classify_equilibrium(const Configuration& cfg) {
  return classify(cfg, nullptr);
}

EquilibriumClass classify_equilibrium(const Configuration& cfg,
                                      const SlipDirectionEvidence& evidence) {
  return classify(cfg, &evidence);
}

ModeTable::ModeTable(const ZodTableau& tab) {
  using CS = ContactStatus;
  for (CS a : {CS::Separated, CS::TouchingResting}) {
    for (CS b : {CS::Separated, CS::TouchingResting}) {
      for (int s : {-1, 0, 1}) {
        const QualitativeState qs{a, b, s};
        table_[index(qs)] = consistent_modes(tab, qs);
      }
    }
  }
}

int ModeTable::index(const QualitativeState& qs) {
  return (static_cast<int>(qs.contact1) * 3 + static_cast<int>(qs.contact2)) * 3 +
         (qs.slip_sign + 1);
}

const std::vector<ModeSolution>& ModeTable::lookup(const QualitativeState& qs) const {
  return table_[index(qs)];
}

}  // namespace twocontact
