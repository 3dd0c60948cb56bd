#include "twocontact/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twocontact {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::NoEquilibrium: return "NoEquilibrium";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Justification j) noexcept {
  switch (j) {
    case Justification::Thm1Ambiguity: return "Thm1-Ambiguity";
    case Justification::Thm2ReverseChatter: return "Thm2-ReverseChatter";
    case Justification::Thm3GlobalG: return "Thm3-GlobalG";
    case Justification::Thm4aStablePartition: return "Thm4a-StablePartition";
    case Justification::Thm5MonotoneR: return "Thm5-MonotoneR";
    case Justification::None: return "None";
  }
  return "?";
}

int exit_code(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return 0;
    case Verdict::Unstable: return 1;
    case Verdict::Degenerate:
    case Verdict::Inconclusive: return 3;
    case Verdict::NoEquilibrium: return 4;
  }
  return 3;
}

SlipDirectionEvidence slip_direction_evidence(const RGMap& map) {
  SlipDirectionEvidence ev;
  for (int dir = 0; dir < 2; ++dir) {
    const int sign = dir == 0 ? -1 : 1;
    ev.endpoint_not_attractive[dir] = map.endpoint(sign).not_attractive();
    ev.no_slipping_double_impact[dir] =
        std::none_of(map.samples.begin(), map.samples.end(), [sign](const RGSample& s) {
          return s.flags.slippingDoubleImpact && s.flags.slipSign == sign;
        });
  }
  return ev;
}

std::optional<FixedPoint> dominant_fixed_point(const RGMap& map) {
  std::optional<FixedPoint> best;
  for (const FixedPoint& fp : map.fixedPoints) {
    if (fp.stability != FixedPointStability::Attractive) continue;
    if (!best || fp.G > best->G) best = fp;
  }
  return best;
}

Analysis analyze(const Configuration& cfg, const RGOptions& opts) {
  Analysis a;
  a.cfg = cfg;
  a.eq = classify_equilibrium(cfg);
  StabilityVerdict& v = a.verdict;
  const double margin = opts.margin;
  auto note = [&](const std::string& s) { v.notes.push_back(s); };

  if (a.eq.marginal) {
    v.verdict = Verdict::Degenerate;
    std::ostringstream os;
    os << "a contact-mode inequality is within tolerance of equality (margin "
       << a.eq.margin << ")";
    note(os.str());
    return a;
  }
  if (!a.eq.isEquilibrium) {
    v.verdict = Verdict::NoEquilibrium;
    note("SS is not consistent at rest");
    return a;
  }
  if (a.eq.isAmbiguous) {
    v.verdict = Verdict::Unstable;
    v.justification = Justification::Thm1Ambiguity;
    v.ambiguity = a.eq.ambiguityWitness;
    note("mode " + a.eq.ambiguityWitness->name() + " is also consistent at rest");
    return a;
  }
  if (!a.eq.isPainleveFree) {
    v.verdict = Verdict::Inconclusive;
    note("some qualitative state has no or several consistent modes (Painleve)");
    return a;
  }

  try {
    a.map = build_rg_map(cfg, opts);
  } catch (const Error& e) {
    v.verdict = Verdict::Inconclusive;
    note(std::string("return map failed: ") + e.what());
    return a;
  }
  const RGMap& map = *a.map;
  v.grid_samples = map.samples.size();
  if (!a.eq.isPersistent) a.eq = classify_equilibrium(cfg, slip_direction_evidence(map));

  for (const EndpointRecord* e : {&map.endpointMinus, &map.endpointPlus}) {
    if (e->set == EndpointSet::Unclassified) {
      note(std::string("endpoint ") + (e->side > 0 ? "+" : "-") +
           "pi/2 unclassified: " + e->note);
    }
  }

  // Theorem 2: any fixed point with growth above one.
  for (const FixedPoint& fp : map.fixedPoints) {
    if (fp.G > 1 + margin && (!v.witness || fp.G > v.witness->G)) v.witness = fp;
  }
  if (v.witness) {
    v.verdict = Verdict::Unstable;
    v.justification = Justification::Thm2ReverseChatter;
    return a;
  }
  for (const FixedPoint& fp : map.fixedPoints) {
    if (std::abs(fp.G - 1) <= margin) {
      v.verdict = Verdict::Degenerate;
      v.witness = fp;
      note("a fixed point has growth ratio within the margin of 1");
      return a;
    }
  }
  if (map.any_flag(&RGFlags::twoContactLiftoff)) {
    v.verdict = Verdict::Inconclusive;
    note("some sampled cycles leave a two-contact slip into flight");
    return a;
  }
  if (!a.eq.isWeaklyPersistent) {
    v.verdict = Verdict::Inconclusive;
    note("equilibrium is not weakly persistent; no stability theorem applies");
    return a;
  }

  const std::optional<double> gmax = map.max_G();
  if (a.eq.isPersistent && gmax && *gmax < 1 - margin) {
    v.verdict = Verdict::Stable;
    v.justification = Justification::Thm3GlobalG;
    v.witness = dominant_fixed_point(map);
    return a;
  }

  const bool all_fp_contract =
      std::all_of(map.fixedPoints.begin(), map.fixedPoints.end(),
                  [&](const FixedPoint& fp) { return fp.G < 1 - margin; });
  if (all_fp_contract && map.non_decreasing(margin)) {
    v.verdict = Verdict::Stable;
    v.justification = Justification::Thm5MonotoneR;
    v.witness = dominant_fixed_point(map);
    note("R is non-decreasing on the sample grid");
    return a;
  }

  if (auto p = build_stable_partition(map, margin)) {
    v.verdict = Verdict::Stable;
    v.justification = Justification::Thm4aStablePartition;
    v.partition = std::move(p);
    v.witness = dominant_fixed_point(map);
    return a;
  }

  if (a.eq.isPersistent && gmax && std::abs(*gmax - 1) <= margin) {
    v.verdict = Verdict::Degenerate;
    note("the largest sampled growth ratio is within the margin of 1");
    return a;
  }
  v.verdict = Verdict::Inconclusive;
  note("no stable partition was found");
  return a;
}

StabilityVerdict stability_verdict(const Configuration& cfg, const RGOptions& opts) {
  return analyze(cfg, opts).verdict;
}

}  // namespace twocontact
