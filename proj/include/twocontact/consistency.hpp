#pragma once

#include <array>
#include <optional>
#include <vector>

#include "twocontact/model.hpp"

namespace twocontact {

inline constexpr double kTolCons = 1e-8;

enum class ContactStatus : std::uint8_t {
  Separated,
  TouchingApproaching,
  TouchingResting,
};

// Discrete description of a state. Under the ZOD every mode has constant
// accelerations and forces, so this is all consistency depends on.
//
// slip_sign is the sign of the tangential velocity at the resting contact;
// with both contacts resting it refers to dx2 (dx1 follows kinematically).
struct QualitativeState {
  ContactStatus contact1 = ContactStatus::TouchingResting;
  ContactStatus contact2 = ContactStatus::TouchingResting;
  int slip_sign = 0;

  ContactStatus at(int contact) const { return contact == 0 ? contact1 : contact2; }
  bool is_static() const {
    return contact1 == ContactStatus::TouchingResting &&
           contact2 == ContactStatus::TouchingResting && slip_sign == 0;
  }
  bool operator==(const QualitativeState&) const = default;
};

// The non-static qualitative states with no approaching contact:
// one with both contacts separated, three per single resting contact and two
// double-contact slip directions.
std::vector<QualitativeState> non_static_states();

bool is_admissible(const ZodTableau& tab, ContactMode mode);
std::vector<ContactMode> admissible_modes(const Configuration& cfg);
std::vector<ContactMode> admissible_modes(const ZodTableau& tab);

// Result of testing one mode at one qualitative state.
struct ModeCheck {
  ModeSolution solution;
  bool compatible = false;  // letters fit the contact/slip pattern at all
  bool consistent = false;
  bool marginal = false;
  double margin = 0;  // smallest normalized inequality margin
};

ModeCheck check_mode(const ZodTableau& tab, ContactMode mode,
                     const QualitativeState& qs, double tol = kTolCons);

// Consistent modes (ModeSolution.consistent = true) among the admissible
// words. Marginal modes are not included; use consistency_report for those.
std::vector<ModeSolution> consistent_modes(const ZodTableau& tab,
                                           const Configuration& cfg,
                                           const QualitativeState& qs);
std::vector<ModeSolution> consistent_modes(const ZodTableau& tab,
                                           const QualitativeState& qs);

struct ConsistencyReport {
  std::vector<ModeSolution> consistent;
  std::vector<ModeSolution> marginal;
  double min_abs_margin = 0;  // closest decisive margin to zero
};
ConsistencyReport consistency_report(const ZodTableau& tab,
                                     const QualitativeState& qs,
                                     double tol = kTolCons);

// Per-direction evidence for condition 2 of weak persistence, gathered from
// the reduced return map. Index 0: dx2 < 0 (endpoint -pi/2), 1: dx2 > 0.
struct SlipDirectionEvidence {
  std::array<bool, 2> endpoint_not_attractive{false, false};
  std::array<bool, 2> no_slipping_double_impact{false, false};
};

struct EquilibriumClass {
  bool isEquilibrium = false;
  bool isAmbiguous = false;
  std::optional<ContactMode> ambiguityWitness;
  bool isPainleveFree = false;
  bool isPersistent = false;
  bool isWeaklyPersistent = false;
  bool marginal = false;
  double margin = 0;
  // Condition 1 of weak persistence per slip direction (index as above).
  std::array<bool, 2> double_slip_sustained{false, false};
  // The unique two-contact slip mode per direction, when one exists.
  std::array<std::optional<ContactMode>, 2> double_slip_mode;
};

// Without evidence, isWeaklyPersistent uses condition 1 only.
EquilibriumClass classify_equilibrium(const Configuration& cfg);
EquilibriumClass classify_equilibrium(const Configuration& cfg,
                                      const SlipDirectionEvidence& evidence);

// Per-state table of the unique consistent mode, used by the simulator.
class ModeTable {
 public:
  explicit ModeTable(const ZodTableau& tab);

  // Consistent modes for a state; the rest state is included.
  const std::vector<ModeSolution>& lookup(const QualitativeState& qs) const;

 private:
  static int index(const QualitativeState& qs);
  std::array<std::vector<ModeSolution>, 27> table_;
};

}  // namespace twocontact
