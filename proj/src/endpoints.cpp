#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twocontact/poincare.hpp"

namespace twocontact {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}
}  // namespace

const char* to_string(EndpointSet s) noexcept {
  switch (s) {
    case EndpointSet::Set1: return "Set1";
    case EndpointSet::Set2: return "Set2";
    case EndpointSet::Undefined: return "Undefined";
    case EndpointSet::Unclassified: return "Unclassified";
  }
  return "?";
}

bool EndpointRecord::not_attractive() const {
  switch (set) {
    case EndpointSet::Set2: return true;
    case EndpointSet::Set1: return Rprime > 1;
    case EndpointSet::Undefined:
      // Every probe came to rest: nothing is carried towards the endpoint.
      return !probes.empty() &&
             std::all_of(probes.begin(), probes.end(),
                         [](const EndpointProbe& p) { return p.sample.flags.ssExit; });
    case EndpointSet::Unclassified: return false;
  }
  return false;
}

EndpointRecord endpoint_analysis(const RGFunction& f, int side,
                                 const std::vector<double>& eps, double fit_tol) {
  EndpointRecord rec;
  rec.side = side > 0 ? 1 : -1;
  std::vector<double> e = eps;
  std::sort(e.begin(), e.end(), std::greater<>());
  for (double ek : e) rec.probes.push_back({ek, f(rec.side * (kHalfPi - ek))});
  if (rec.probes.size() < 2) {
    rec.note = "need at least two probes";
    return rec;
  }
  for (const EndpointProbe& p : rec.probes) {
    if (!p.sample.defined()) {
      rec.set = EndpointSet::Undefined;
      rec.note = "map undefined at eps = " + std::to_string(p.eps) + ": " + p.sample.reason;
      return rec;
    }
  }

  const EndpointProbe& p1 = rec.probes[rec.probes.size() - 2];
  const EndpointProbe& p2 = rec.probes.back();
  const double r1 = *p1.sample.r, r2 = *p2.sample.r;
  const double g1 = *p1.sample.g, g2 = *p2.sample.g;

  // Set 1: the distance of R from the endpoint shrinks in proportion to eps.
  const double d1 = kHalfPi - rec.side * r1, d2 = kHalfPi - rec.side * r2;
  const double q1 = d1 / p1.eps, q2 = d2 / p2.eps;
  const double set1_res = std::max(rel(q1, q2), rel(g1, g2));
  // Set 2: R converges inside the interval and G * eps converges.
  const double l1 = g1 * p1.eps, l2 = g2 * p2.eps;
  const double set2_res = std::max(std::abs(r2 - r1) / kHalfPi, rel(l1, l2));

  std::ostringstream note;
  if (d2 < 10 * p2.eps * std::max(g2, 1.0) && set1_res < fit_tol) {
    rec.set = EndpointSet::Set1;
    rec.G_pm = g2;
    rec.Rprime = q2;
    rec.rprime_residual = rel(q2, g2);
    rec.fit_residual = set1_res;
  } else if (std::abs(r2) < kHalfPi - 1e-3 && set2_res < fit_tol) {
    rec.set = EndpointSet::Set2;
    rec.R_pm = r2;
    rec.G_eps_limit = l2;
    rec.tan_R_pm = std::tan(r2);
    rec.identity_residual = rel(l2, rec.tan_R_pm);
    rec.fit_residual = set2_res;
  } else {
    rec.set = EndpointSet::Unclassified;
    rec.fit_residual = std::min(set1_res, set2_res);
    note << "neither fit converged (Set 1 residual " << set1_res << ", Set 2 residual "
         << set2_res << ")";
    rec.note = note.str();
  }
  return rec;
}

std::pair<EndpointRecord, EndpointRecord> endpoint_analysis(const Configuration& cfg,
                                                            const RGOptions& opts) {
  const Simulator sim(cfg);
  const RGFunction f = rg_function(sim);
  return {endpoint_analysis(f, -1, opts.endpoint_eps, opts.fit_tol),
          endpoint_analysis(f, +1, opts.endpoint_eps, opts.fit_tol)};
}

}  // namespace twocontact
