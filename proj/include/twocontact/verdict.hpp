#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twocontact/consistency.hpp"
#include "twocontact/poincare.hpp"

namespace twocontact {

enum class Verdict : std::uint8_t { Stable, Unstable, NoEquilibrium, Degenerate, Inconclusive };

enum class Justification : std::uint8_t {
  Thm1Ambiguity,
  Thm2ReverseChatter,
  Thm3GlobalG,
  Thm4aStablePartition,
  Thm5MonotoneR,
  None,
};

const char* to_string(Verdict v) noexcept;
const char* to_string(Justification j) noexcept;

// Process exit code for a verdict: 0 stable, 1 unstable, 3 inconclusive or
// degenerate, 4 no equilibrium.
int exit_code(Verdict v) noexcept;

struct StabilityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  Justification justification = Justification::None;
  std::optional<FixedPoint> witness;            // Thm2, or the decisive fixed point
  std::optional<Partition> partition;           // Thm4a
  std::optional<ContactMode> ambiguity;         // Thm1
  std::vector<std::string> notes;
  std::size_t grid_samples = 0;                 // resolution behind sampled claims
};

struct Analysis {
  Configuration cfg;
  EquilibriumClass eq;
  std::optional<RGMap> map;
  StabilityVerdict verdict;
};

// Evidence for the weak-persistence condition 2, per slip direction, from a
// sampled map.
SlipDirectionEvidence slip_direction_evidence(const RGMap& map);

// The attractive fixed point with the largest growth ratio, if any.
std::optional<FixedPoint> dominant_fixed_point(const RGMap& map);

// Equilibrium classification followed by the theorem cascade. The return map
// is only built when the cascade needs it (not for missing or ambiguous
// equilibria).
Analysis analyze(const Configuration& cfg, const RGOptions& opts = {});
StabilityVerdict stability_verdict(const Configuration& cfg, const RGOptions& opts = {});

}  // namespace twocontact
