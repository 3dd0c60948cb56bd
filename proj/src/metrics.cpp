#include <algorithm>
#include <cmath>

#include "twocontact/simulator.hpp"

namespace twocontact {

namespace {

// Metric maxima over one segment: endpoints plus apex heights of free
// contacts (speeds are monotone within a segment since accelerations are
// constant).
MetricSample segment_sample(const Segment& s) {
  const ContactState a = s.at(s.t_start), b = s.at(s.t_end);
  MetricSample m;
  m.t = s.t_end;
  m.Delta = std::max(delta_metric(a), delta_metric(b));
  m.D = std::max(big_d_metric(a), big_d_metric(b));
  m.d = std::max(small_d_metric(a), small_d_metric(b));
  for (int i = 0; i < 2; ++i) {
    if (s.dq0[i] > 0 && s.qdd[i] < 0) {
      const double ta = -s.dq0[i] / s.qdd[i];
      if (ta < s.duration()) {
        const double apex = std::sqrt(std::max(s.q0[i] + 0.5 * s.dq0[i] * ta, 0.0));
        m.Delta = std::max(m.Delta, apex);
        m.D = std::max(m.D, apex);
        m.d = std::max(m.d, apex);
      }
    }
  }
  // x2 is monotone only piecewise; check the turning point of dx2.
  if (s.dq0[2] * s.qdd[2] < 0) {
    const double ta = -s.dq0[2] / s.qdd[2];
    if (ta < s.duration()) {
      const double x = s.q0[2] + 0.5 * s.dq0[2] * ta;
      m.Delta = std::max(m.Delta, std::sqrt(std::abs(x)));
    }
  }
  return m;
}

double geometric_ratio(const std::vector<double>& v, std::size_t skip) {
  std::vector<double> logs;
  for (std::size_t k = skip + 1; k < v.size(); ++k) {
    if (v[k] > 0 && v[k - 1] > 0) logs.push_back(std::log(v[k] / v[k - 1]));
  }
  if (logs.empty()) return std::nan("");
  double sum = 0;
  for (double l : logs) sum += l;
  return std::exp(sum / logs.size());
}

}  // namespace

FtlsMetrics metrics(const Trajectory& traj) {
  FtlsMetrics out;
  for (const Segment& s : traj.segments) {
    MetricSample m = segment_sample(s);
    out.Delta_max = std::max(out.Delta_max, m.Delta);
    out.D_max = std::max(out.D_max, m.D);
    out.d_max = std::max(out.d_max, m.d);
    out.series.push_back(m);
  }
  for (const Event& e : traj.events) {
    out.Delta_max = std::max({out.Delta_max, delta_metric(e.pre), delta_metric(e.post)});
    out.D_max = std::max({out.D_max, big_d_metric(e.pre), big_d_metric(e.post)});
    out.d_max = std::max({out.d_max, small_d_metric(e.pre), small_d_metric(e.post)});
  }
  out.t_f = traj.final_state.t;
  return out;
}

std::optional<double> fitted_speed_ratio(const Trajectory& traj, std::size_t skip) {
  std::vector<double> v;
  for (const Event* e : traj.section_crossings()) v.push_back(std::abs(e->pre.dz2));
  const double r = geometric_ratio(v, skip);
  if (std::isnan(r)) return std::nullopt;
  return r;
}

std::optional<double> fitted_peak_ratio(const Trajectory& traj, std::size_t skip) {
  std::vector<double> v;
  for (const Peak& p : traj.peaks) {
    if (p.contact == 1) v.push_back(p.z);
  }
  const double r = geometric_ratio(v, skip);
  if (std::isnan(r)) return std::nullopt;
  return r;
}

}  // namespace twocontact
