#include <cmath>
#include <limits>
#include <ostream>

#include "twocontact/simulator.hpp"

namespace twocontact {

namespace {

void row(std::ostream& out, const ContactState& s, const std::string& mode,
         const std::string& event) {
  out << s.t << ',' << s.z1 << ',' << s.z2 << ',' << s.x2 << ',' << s.dz1 << ','
      << s.dz2 << ',' << s.dx2 << ',' << mode << ',' << event << '\n';
}

std::string event_label(const Event& e) {
  std::string s = to_string(e.kind);
  if (e.kind == EventKind::Impact) {
    s += e.contact == 2 ? "12" : e.contact == 0 ? "1" : "2";
    if (e.section) s += "*";
  }
  return s;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          double sample_period) {
  const auto old_precision = out.precision(12);
  out << "t,z1,z2,x2,dz1,dz2,dx2,mode,event\n";
  std::size_t e = 0;
  auto flush_events = [&](double until, const std::string& mode) {
    while (e < traj.events.size() && traj.events[e].t <= until) {
      const Event& ev = traj.events[e++];
      row(out, ev.pre, mode, event_label(ev));
    }
  };
  for (const Segment& s : traj.segments) {
    const std::string mode = s.mode.name();
    flush_events(s.t_start, mode);
    row(out, s.at(s.t_start), mode, "");
    if (sample_period > 0) {
      double t = std::ceil(s.t_start / sample_period) * sample_period;
      if (t <= s.t_start) t += sample_period;
      for (; t < s.t_end; t += sample_period) row(out, s.at(t), mode, "");
    }
  }
  flush_events(std::numeric_limits<double>::infinity(), "");
  row(out, traj.final_state, "", to_string(traj.terminal));
  out.precision(old_precision);
}

}  // namespace twocontact
