#include <algorithm>
#include <cmath>
#include <numbers>

#include "twocontact/poincare.hpp"

namespace twocontact {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

int sign_of(double v) { return (v > 0) - (v < 0); }

// Index of every interval containing value (closed intervals share their
// breakpoints).
std::vector<int> containing(const std::vector<PartitionInterval>& iv, double value) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(iv.size()); ++k) {
    if (value >= iv[k].lo && value <= iv[k].hi) out.push_back(k);
  }
  return out;
}

}  // namespace

bool Partition::stable() const {
  return std::all_of(intervals.begin(), intervals.end(),
                     [](const PartitionInterval& i) { return i.safe || i.transient; });
}

Partition label_partition(const RGMap& map, std::vector<double> breakpoints,
                          double margin) {
  Partition p;
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                   [](double b) { return std::abs(b) >= kHalfPi; }),
                    breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  p.breakpoints = breakpoints;

  std::vector<double> cuts{-kHalfPi};
  cuts.insert(cuts.end(), breakpoints.begin(), breakpoints.end());
  cuts.push_back(kHalfPi);
  const int n = static_cast<int>(cuts.size()) - 1;
  p.intervals.resize(n);
  for (int k = 0; k < n; ++k) {
    p.intervals[k].lo = cuts[k];
    p.intervals[k].hi = cuts[k + 1];
  }

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<int> sign(n, 2);  // 2: no sample seen yet
  for (const RGSample& s : map.samples) {
    if (!s.defined()) continue;
    const int sg = sign_of(*s.r - s.phi);
    const std::vector<int> from = containing(p.intervals, s.phi);
    const std::vector<int> to = containing(p.intervals, *s.r);
    for (int j : from) {
      PartitionInterval& iv = p.intervals[j];
      iv.max_G = std::max(iv.max_G, *s.g);
      sign[j] = sign[j] == 2 ? sg : (sign[j] == sg ? sg : 0);
      for (int k : to) {
        if (k != j) adj[j][k] = true;
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (adj[j][k]) p.edges.emplace_back(j, k);
    }
  }

  // Transitive closure; an interval is on a cycle iff it reaches itself.
  std::vector<std::vector<bool>> reach = adj;
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][m]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[m][j]) reach[i][j] = true;
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    PartitionInterval& iv = p.intervals[k];
    iv.sign = sign[k] == 2 ? 0 : sign[k];
    iv.on_cycle = reach[k][k];
    iv.safe = iv.max_G < 1 - margin;
    iv.transient = iv.sign != 0 && !iv.on_cycle;
  }
  return p;
}

std::optional<Partition> build_stable_partition(const RGMap& map, double margin) {
  for (const EndpointRecord* e : {&map.endpointMinus, &map.endpointPlus}) {
    if (e->set == EndpointSet::Set1 && std::abs(e->G_pm - 1) <= margin) return std::nullopt;
  }

  std::vector<double> fps;
  for (const FixedPoint& fp : map.fixedPoints) fps.push_back(fp.phi);
  std::sort(fps.begin(), fps.end());
  double eps = 0.01;
  for (std::size_t k = 1; k < fps.size(); ++k) {
    eps = std::min(eps, 0.5 * (fps[k] - fps[k - 1]));
  }
  std::vector<double> breaks;
  for (double f : fps) {
    breaks.push_back(f - eps);
    breaks.push_back(f + eps);
  }
  // Sign changes of R - phi that are not fixed points (jumps of R).
  const RGSample* prev = nullptr;
  for (const RGSample& s : map.samples) {
    if (!s.defined()) continue;
    if (prev && sign_of(*s.r - s.phi) != sign_of(*prev->r - prev->phi)) {
      const double mid = 0.5 * (s.phi + prev->phi);
      const bool near_fp = std::any_of(fps.begin(), fps.end(), [&](double f) {
        return std::abs(f - mid) <= eps;
      });
      if (!near_fp) breaks.push_back(mid);
    }
    prev = &s;
  }

  Partition p = label_partition(map, breaks, margin);

  // Extremal intervals at endpoints where R stays bounded: cut them so that
  // R never maps into the reduced extremal interval.
  const auto rmin = map.min_R(), rmax = map.max_R();
  if (rmin && rmax) {
    bool cut = false;
    if (map.endpointPlus.set == EndpointSet::Set2) {
      const double lo = p.intervals.back().lo;
      if (*rmax >= lo) {
        const double b = 0.5 * (std::max(*rmax, lo) + kHalfPi);
        if (b > lo) breaks.push_back(b), cut = true;
      }
    }
    if (map.endpointMinus.set == EndpointSet::Set2) {
      const double hi = p.intervals.front().hi;
      if (*rmin <= hi) {
        const double b = 0.5 * (std::min(*rmin, hi) - kHalfPi);
        if (b < hi) breaks.push_back(b), cut = true;
      }
    }
    if (cut) {
      p = label_partition(map, breaks, margin);
      p.extremalCutApplied = true;
    }
  }
  if (!p.stable()) return std::nullopt;
  return p;
}

}  // namespace twocontact
