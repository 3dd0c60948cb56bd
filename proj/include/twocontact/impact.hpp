#pragma once

#include <array>
#include <optional>
#include <vector>

#include "twocontact/model.hpp"

namespace twocontact {

enum class TangentialRegime : std::uint8_t { Stick, SlipPos, SlipNeg };

const char* to_string(TangentialRegime r) noexcept;

// One combination of active contacts and tangential regimes.
struct ImpactCandidate {
  std::array<bool, 2> active{false, false};
  std::array<TangentialRegime, 2> regime{TangentialRegime::Stick,
                                         TangentialRegime::Stick};
  bool operator==(const ImpactCandidate&) const = default;
};

struct ImpactOutcome {
  Vec3 post_velocities = Vec3::Zero();  // (dz1+, dz2+, dx2+)
  Vec4 impulses = Vec4::Zero();         // (j1z, j1x, j2z, j2x)
  ImpactCandidate candidate;
  bool slippingDouble = false;
  int slipSign = 0;  // sign of dx2+ for a slipping double impact
  bool impact = false;  // false: grazing, no velocity jump
  // Number of candidates that satisfied the impact law; more than one means
  // the preference order decided.
  int satisfied = 0;
  int rank = -1;  // position of the returned candidate in the preference order

  std::array<bool, 2> active() const { return candidate.active; }
};

struct ImpactOptions {
  double tol_graze = 1e-10;  // m/s, approach speeds below this are no impact
  double tol_rel = 1e-9;     // relative tolerance of the inequality checks
};

// Candidates in preference order for the given touching contacts: both active
// before one; within an active set fewer slipping contacts first; single
// impacts ordered by approach speed (fastest first), ties by contact index.
std::vector<ImpactCandidate> preference_order(const std::array<bool, 2>& touching,
                                              const Vec3& dq_pre);

// Solves the impact law for one candidate; nullopt when it violates any
// constraint.
std::optional<ImpactOutcome> evaluate_candidate(const ZodTableau& tab,
                                                const Vec3& dq_pre,
                                                const std::array<bool, 2>& touching,
                                                const ImpactCandidate& cand,
                                                const ImpactOptions& opts = {});

// Touching contacts are those with z_i <= kTolPen.
ImpactOutcome resolve_impact(const ZodTableau& tab, const ContactState& pre,
                             const ImpactOptions& opts = {});
ImpactOutcome resolve_impact(const ZodTableau& tab, const Vec3& dq_pre,
                             const std::array<bool, 2>& touching,
                             const ImpactOptions& opts = {});

// Kinetic energy lost in the impact, J.
double energy_balance(const ZodTableau& tab, const ContactState& pre,
                      const ImpactOutcome& out);

}  // namespace twocontact
