#include "twocontact/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

#include <omp.h>

namespace twocontact {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

const char* to_string(FixedPointStability s) noexcept {
  switch (s) {
    case FixedPointStability::Attractive: return "attractive";
    case FixedPointStability::Repulsive: return "repulsive";
    case FixedPointStability::Neutral: return "neutral";
  }
  return "?";
}

RGSample rg_eval(const Simulator& sim, double phi, double speed) {
  RGSample out;
  out.phi = phi;
  ContactState init;
  init.dz2 = -speed * std::cos(phi);
  init.dx2 = speed * std::sin(phi);

  SimOptions opts;
  opts.stop_at_section = true;
  opts.max_events = 2000;
  opts.t_max = 1e4 * speed / sim.tableau().accel_scale;

  Trajectory traj;
  try {
    traj = sim.run(init, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PainleveEncountered) throw;
    out.reason = e.what();
    return out;
  }
  out.flags.slippingDoubleImpact = traj.slipping_double_impact;
  out.flags.slipSign = traj.slipping_double_sign;
  out.flags.zenoExit = traj.zeno;
  out.flags.twoContactLiftoff = traj.left_double_slip;

  switch (traj.terminal) {
    case Terminal::SectionReached: {
      const Event& e = traj.events.back();
      out.r = e.phi;
      out.g = std::abs(e.pre.dz2) / (speed * std::cos(phi));
      break;
    }
    case Terminal::Equilibrium:
      out.flags.ssExit = true;
      out.reason = "came to rest without crossing the section";
      break;
    case Terminal::Diverged:
      out.reason = "diverged before the next crossing";
      break;
    default:
      out.reason = traj.budget_exhausted ? "event budget exhausted"
                                         : "no crossing within the time limit";
      break;
  }
  return out;
}

RGFunction rg_function(const Simulator& sim) {
  return [&sim](double phi) { return rg_eval(sim, phi); };
}

std::optional<double> RGMap::max_G() const {
  std::optional<double> m;
  for (const RGSample& s : samples) {
    if (s.defined()) m = std::max(m.value_or(0.0), *s.g);
  }
  return m;
}

std::optional<double> RGMap::min_R() const {
  std::optional<double> m;
  for (const RGSample& s : samples) {
    if (s.defined()) m = m ? std::min(*m, *s.r) : *s.r;
  }
  return m;
}

std::optional<double> RGMap::max_R() const {
  std::optional<double> m;
  for (const RGSample& s : samples) {
    if (s.defined()) m = m ? std::max(*m, *s.r) : *s.r;
  }
  return m;
}

bool RGMap::any_flag(bool RGFlags::*flag) const {
  return std::any_of(samples.begin(), samples.end(),
                     [flag](const RGSample& s) { return s.flags.*flag; });
}

bool RGMap::non_decreasing(double margin) const {
  const RGSample* prev = nullptr;
  for (const RGSample& s : samples) {
    if (!s.defined()) continue;
    if (prev && *s.r - *prev->r < -margin * (s.phi - prev->phi)) return false;
    prev = &s;
  }
  return true;
}

std::vector<double> uniform_grid(int n, double edge) {
  std::vector<double> out(n);
  const double lo = -kHalfPi + edge, hi = kHalfPi - edge;
  for (int k = 0; k < n; ++k) {
    out[k] = n == 1 ? 0.0 : lo + (hi - lo) * k / (n - 1);
  }
  if (n % 2 == 1) out[n / 2] = 0.0;
  return out;
}

std::vector<RGSample> sample_serial(const RGFunction& f, const std::vector<double>& phis) {
  std::vector<RGSample> out;
  out.reserve(phis.size());
  for (double phi : phis) out.push_back(f(phi));
  return out;
}

std::vector<RGSample> sample_parallel(const RGFunction& f, const std::vector<double>& phis,
                                      int threads) {
  std::vector<RGSample> out(phis.size());
  std::exception_ptr error;
  const long n = static_cast<long>(phis.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
  for (long k = 0; k < n; ++k) {
    try {
      out[k] = f(phis[k]);
    } catch (...) {
#pragma omp critical(twocontact_sample_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace {

bool needs_refinement(const RGSample& a, const RGSample& b, double jump) {
  if (a.defined() != b.defined()) return true;
  if (!a.defined()) return false;
  if (sign_of(*a.r - a.phi) != sign_of(*b.r - b.phi)) return true;
  if (std::abs(*b.r - *a.r) > jump) return true;
  const double gmax = std::max(*a.g, *b.g);
  return std::abs(*b.g - *a.g) > jump * std::max(gmax, 1.0);
}

}  // namespace

RGMap build_rg_map(const RGFunction& f, const RGOptions& opts) {
  auto sample = [&](const std::vector<double>& phis) {
    return opts.parallel ? sample_parallel(f, phis, opts.threads) : sample_serial(f, phis);
  };
  RGMap map;
  map.samples = sample(uniform_grid(opts.grid, opts.edge));

  std::vector<double> extra;
  const std::size_t n = map.samples.size();
  const std::size_t edge_intervals = 5;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const RGSample& a = map.samples[k];
    const RGSample& b = map.samples[k + 1];
    const bool at_edge = k < edge_intervals || k + 1 + edge_intervals >= n;
    if (at_edge || needs_refinement(a, b, opts.jump)) {
      for (int j = 1; j < opts.refine; ++j) {
        extra.push_back(a.phi + (b.phi - a.phi) * j / opts.refine);
      }
    }
  }
  if (!extra.empty()) {
    std::vector<RGSample> more = sample(extra);
    map.samples.insert(map.samples.end(), more.begin(), more.end());
    std::sort(map.samples.begin(), map.samples.end(),
              [](const RGSample& a, const RGSample& b) { return a.phi < b.phi; });
  }

  map.fixedPoints = find_fixed_points(map, f, opts.tol_fp);
  map.endpointMinus = endpoint_analysis(f, -1, opts.endpoint_eps, opts.fit_tol);
  map.endpointPlus = endpoint_analysis(f, +1, opts.endpoint_eps, opts.fit_tol);
  return map;
}

RGMap build_rg_map(const Configuration& cfg, const RGOptions& opts) {
  const Simulator sim(cfg);
  return build_rg_map(rg_function(sim), opts);
}

std::vector<FixedPoint> find_fixed_points(const RGMap& map, const RGFunction& f,
                                          double tol_fp) {
  std::vector<FixedPoint> out;
  auto residual = [](const RGSample& s) { return *s.r - s.phi; };

  auto annotate = [&](double phi, const RGSample& at) {
    FixedPoint fp;
    fp.phi = phi;
    fp.G = *at.g;
    const double h = std::min(1e-5, 0.5 * (kHalfPi - std::abs(phi)));
    const RGSample p = f(phi + h), m = f(phi - h);
    if (p.defined() && m.defined()) {
      fp.slope = (*p.r - *m.r) / (2 * h);
    } else if (p.defined()) {
      fp.slope = (*p.r - *at.r) / h;
    } else if (m.defined()) {
      fp.slope = (*at.r - *m.r) / h;
    }
    const double a = std::abs(fp.slope);
    fp.stability = a < 1 - 1e-9   ? FixedPointStability::Attractive
                   : a > 1 + 1e-9 ? FixedPointStability::Repulsive
                                  : FixedPointStability::Neutral;
    if (out.empty() || std::abs(out.back().phi - phi) > 10 * tol_fp) out.push_back(fp);
  };

  for (std::size_t k = 0; k + 1 < map.samples.size(); ++k) {
    const RGSample& a = map.samples[k];
    const RGSample& b = map.samples[k + 1];
    if (!a.defined() || !b.defined()) continue;
    double lo = a.phi, hi = b.phi;
    double flo = residual(a), fhi = residual(b);
    if (flo == 0) {
      annotate(a.phi, a);
      continue;
    }
    if (fhi == 0) {
      if (k + 2 == map.samples.size()) annotate(b.phi, b);
      continue;
    }
    if (sign_of(flo) == sign_of(fhi)) continue;

    bool ok = true;
    std::optional<double> exact;
    while (hi - lo > tol_fp) {
      const double mid = 0.5 * (lo + hi);
      const RGSample s = f(mid);
      if (!s.defined()) {
        ok = false;
        break;
      }
      const double fm = residual(s);
      if (fm == 0) {
        exact = mid;
        break;
      }
      if (sign_of(fm) == sign_of(flo)) {
        lo = mid, flo = fm;
      } else {
        hi = mid, fhi = fm;
      }
    }
    if (!ok) continue;
    // A bracket that keeps a finite gap in R - phi is a jump, not a root.
    if (!exact && std::abs(fhi - flo) > 1e3 * std::max(hi - lo, tol_fp)) continue;
    const double root = exact ? *exact : lo - flo * (hi - lo) / (fhi - flo);
    const RGSample at = f(root);
    if (!at.defined()) continue;
    annotate(root, at);
  }
  return out;
}

void write_rgmap_csv(std::ostream& out, const RGMap& map) {
  const auto old_precision = out.precision(15);
  out << "phi,R,G,defined,flags\n";
  for (const RGSample& s : map.samples) {
    out << s.phi << ',';
    if (s.defined()) {
      out << *s.r << ',' << *s.g << ",1,";
    } else {
      out << ",,0,";
    }
    std::string flags;
    auto add = [&](bool on, const char* name) {
      if (!on) return;
      if (!flags.empty()) flags += '|';
      flags += name;
    };
    add(s.flags.slippingDoubleImpact && s.flags.slipSign >= 0, "double_slip_pos");
    add(s.flags.slippingDoubleImpact && s.flags.slipSign < 0, "double_slip_neg");
    add(s.flags.zenoExit, "zeno");
    add(s.flags.ssExit, "rest");
    add(s.flags.twoContactLiftoff, "liftoff");
    out << flags << '\n';
  }
  out.precision(old_precision);
}

}  // namespace twocontact
