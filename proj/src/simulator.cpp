#include "twocontact/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace twocontact {

const char* to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::Impact: return "Impact";
    case EventKind::ModeSwitch: return "ModeSwitch";
    case EventKind::ZenoPoint: return "ZenoPoint";
    case EventKind::Stop: return "Stop";
  }
  return "?";
}

const char* to_string(Terminal t) noexcept {
  switch (t) {
    case Terminal::Equilibrium: return "Equilibrium";
    case Terminal::ZenoTruncated: return "ZenoTruncated";
    case Terminal::Diverged: return "Diverged";
    case Terminal::TimeOut: return "TimeOut";
    case Terminal::SectionReached: return "SectionReached";
  }
  return "?";
}

ContactState Segment::at(double t) const {
  const double tau = t - t_start;
  ContactState s;
  s.set(q0 + dq0 * tau + 0.5 * qdd * tau * tau, dq0 + qdd * tau);
  s.t = t;
  return s;
}

double delta_metric(const ContactState& s) {
  return std::max({std::sqrt(std::max(s.z1, 0.0)), std::sqrt(std::max(s.z2, 0.0)),
                   std::sqrt(std::abs(s.x2)), std::abs(s.dz1), std::abs(s.dz2),
                   std::abs(s.dx2)});
}

double big_d_metric(const ContactState& s) {
  return std::max({std::sqrt(std::max(s.z1, 0.0)), std::sqrt(std::max(s.z2, 0.0)),
                   std::abs(s.dz1), std::abs(s.dz2), std::abs(s.dx2)});
}

double small_d_metric(const ContactState& s) {
  return std::max({std::sqrt(std::max(s.z1, 0.0)), std::sqrt(std::max(s.z2, 0.0)),
                   std::abs(s.dz1), std::abs(s.dz2)});
}

std::vector<std::string> Trajectory::mode_words() const {
  std::vector<std::string> out;
  std::size_t e = 0;
  auto flush_events = [&](double until) {
    while (e < events.size() && events[e].t <= until) {
      const Event& ev = events[e++];
      if (ev.kind == EventKind::Impact && ev.impact && ev.impact->impact) {
        out.push_back(ev.contact == 2 ? "II" : ev.contact == 0 ? "I1" : "I2");
      } else if (ev.kind == EventKind::ZenoPoint) {
        out.push_back("Z");
      }
    }
  };
  for (const Segment& s : segments) {
    flush_events(s.t_start);
    const std::string w = s.mode.name();
    if (out.empty() || out.back() != w) out.push_back(w);
  }
  flush_events(std::numeric_limits<double>::infinity());
  return out;
}

std::vector<const Event*> Trajectory::impacts() const {
  std::vector<const Event*> out;
  for (const Event& e : events) {
    if (e.kind == EventKind::Impact && e.impact && e.impact->impact) out.push_back(&e);
  }
  return out;
}

std::vector<const Event*> Trajectory::section_crossings() const {
  std::vector<const Event*> out;
  for (const Event& e : events) {
    if (e.section) out.push_back(&e);
  }
  return out;
}

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

double tangential_velocity(const ZodTableau& tab, const Vec3& dq, int i) {
  return i == 0 ? tab.x1_rate.dot(dq) : dq[2];
}

void zero_tangential_velocity(const ZodTableau& tab, Vec3& dq, int i) {
  if (i == 1) {
    dq[2] = 0;
  } else {
    dq[2] = -(tab.x1_rate[0] * dq[0] + tab.x1_rate[1] * dq[1]) / tab.x1_rate[2];
  }
}

// Smallest tau > 0 with z + v tau + a tau^2 / 2 = 0 and a downward crossing.
std::optional<double> touchdown_time(double z, double v, double a) {
  if (z <= 0 && v < 0) return 0.0;
  const double A = 0.5 * a, B = v, C = std::max(z, 0.0);
  std::array<double, 2> roots{-1, -1};
  if (std::abs(A) < 1e-300) {
    if (B < 0) roots[0] = -C / B;
  } else {
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return std::nullopt;
    const double qq = -0.5 * (B + (B >= 0 ? 1 : -1) * std::sqrt(disc));
    roots[0] = qq / A;
    roots[1] = qq != 0 ? C / qq : -1;
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (r > 0 && v + a * r < 0) return r;
  }
  return std::nullopt;
}

bool is_slip(Letter l) { return l == Letter::P || l == Letter::N; }

std::string describe(const QualitativeState& qs) {
  auto st = [](ContactStatus s) {
    switch (s) {
      case ContactStatus::Separated: return "Separated";
      case ContactStatus::TouchingApproaching: return "Approaching";
      case ContactStatus::TouchingResting: return "Resting";
    }
    return "?";
  };
  std::ostringstream os;
  os << "(" << st(qs.contact1) << ", " << st(qs.contact2) << ", slip " << qs.slip_sign
     << ")";
  return os.str();
}

struct Body {
  Vec3 q = Vec3::Zero();
  Vec3 dq = Vec3::Zero();
  double t = 0;
  std::array<bool, 2> resting{false, false};

  ContactState state() const {
    ContactState s;
    s.set(q, dq);
    s.t = t;
    return s;
  }
};

}  // namespace

Simulator::Simulator(const Configuration& cfg)
    : Simulator(cfg, build_tableau(cfg)) {}

Simulator::Simulator(const Configuration& cfg, const ZodTableau& tab)
    : cfg_(cfg), tab_(tab), table_(tab) {}

Trajectory Simulator::run(const ContactState& initial, const SimOptions& opts) const {
  if (initial.z1 < -kTolPen || initial.z2 < -kTolPen) {
    throw Error(ErrorKind::InvalidConfiguration,
                "initial state penetrates the support");
  }
  Trajectory traj;
  Body b;
  b.q = initial.q();
  b.dq = initial.dq();
  b.t = initial.t;

  const double init_disp = std::max({b.q[0], b.q[1], std::abs(b.q[2])});
  traj.speed_scale = std::max(b.dq.cwiseAbs().maxCoeff(),
                              std::sqrt(tab_.accel_scale * std::max(init_disp, 0.0)));
  const double delta0 = delta_metric(initial);
  traj.delta_stop = delta0 > 0 ? opts.divergence_factor * delta0
                               : std::numeric_limits<double>::infinity();
  const double v_zeno = opts.zeno_speed_factor * traj.speed_scale;
  const double t_end = initial.t + opts.t_max;

  auto tol_v = [&](const Vec3& dq) {
    return opts.tol_rel * std::max(dq.cwiseAbs().maxCoeff(), 1e-300);
  };

  std::array<bool, 2> approaching{false, false};
  {
    const double tv = tol_v(b.dq);
    for (int i = 0; i < 2; ++i) {
      if (b.q[i] <= kTolPen) {
        b.q[i] = 0;
        if (b.dq[i] < -tv) {
          approaching[i] = true;
        } else if (b.dq[i] <= tv) {
          b.dq[i] = 0;
          b.resting[i] = true;
        }
      }
    }
  }

  std::vector<ImpactRecord> records;
  std::size_t n_events = 0;
  int stalled = 0;
  bool prev_double_slip = false;

  auto do_impact = [&](const std::array<bool, 2>& impacting) -> bool {
    std::array<bool, 2> touching{b.resting[0] || impacting[0],
                                 b.resting[1] || impacting[1]};
    ImpactOptions iopts;
    iopts.tol_rel = opts.tol_rel;
    iopts.tol_graze = opts.tol_rel * std::max(b.dq.cwiseAbs().maxCoeff(), 1e-300);
    Event ev;
    ev.t = b.t;
    ev.kind = EventKind::Impact;
    ev.contact = impacting[0] && impacting[1] ? 2 : impacting[0] ? 0 : 1;
    ev.pre = b.state();
    const bool section = ev.contact == 1 && b.resting[0];
    const ImpactOutcome out = resolve_impact(tab_, b.dq, touching, iopts);
    b.dq = out.post_velocities;
    for (int i = 0; i < 2; ++i) {
      if (!touching[i]) continue;
      b.q[i] = 0;
      b.resting[i] = out.candidate.active[i] || b.dq[i] == 0;
      if (b.resting[i]) b.dq[i] = 0;
    }
    ev.post = b.state();
    ev.impact = out;
    ev.section = section && out.impact;
    if (ev.section) ev.phi = std::atan2(ev.pre.dx2, std::abs(ev.pre.dz2));
    if (out.slippingDouble) {
      traj.slipping_double_impact = true;
      traj.slipping_double_sign = out.slipSign;
    }
    double speed = 0;
    for (int i = 0; i < 2; ++i) {
      if (impacting[i]) speed = std::max(speed, -ev.pre.dq()[i]);
    }
    records.push_back({b.t, speed, b.q[2], b.dq[2]});
    traj.events.push_back(ev);
    ++n_events;
    return ev.section;
  };

  if (approaching[0] || approaching[1]) do_impact(approaching);

  while (true) {
    if (n_events > opts.max_events) {
      traj.terminal = Terminal::TimeOut;
      traj.budget_exhausted = true;
      break;
    }
    if (opts.stop_at_section && !traj.events.empty() && traj.events.back().section &&
        traj.events.size() > 1) {
      traj.terminal = Terminal::SectionReached;
      break;
    }

    // Qualitative state.
    QualitativeState qs;
    qs.contact1 = b.resting[0] ? ContactStatus::TouchingResting : ContactStatus::Separated;
    qs.contact2 = b.resting[1] ? ContactStatus::TouchingResting : ContactStatus::Separated;
    {
      const double tv = tol_v(b.dq);
      int slip_contact = b.resting[1] ? 1 : b.resting[0] ? 0 : -1;
      if (slip_contact >= 0) {
        const double vt = tangential_velocity(tab_, b.dq, slip_contact);
        if (std::abs(vt) <= tv) {
          zero_tangential_velocity(tab_, b.dq, slip_contact);
          qs.slip_sign = 0;
        } else {
          qs.slip_sign = sign_of(vt);
        }
      }
    }
    if (qs.is_static()) {
      b.dq.setZero();
      const auto& rest = table_.lookup(qs);
      const bool ss = std::any_of(rest.begin(), rest.end(), [](const ModeSolution& s) {
        return s.mode == ContactMode{Letter::S, Letter::S};
      });
      if (ss) {
        traj.terminal = Terminal::Equilibrium;
        if (traj.events.empty() && traj.segments.empty()) break;
        Event ev;
        ev.t = b.t;
        ev.kind = EventKind::Stop;
        ev.pre = ev.post = b.state();
        traj.events.push_back(ev);
        traj.terminal = Terminal::Equilibrium;
        break;
      }
    }

    const auto& modes = table_.lookup(qs);
    if (modes.size() != 1) {
      std::ostringstream msg;
      msg << modes.size() << " consistent contact modes in state " << describe(qs)
          << " at t = " << b.t;
      throw Error(ErrorKind::PainleveEncountered, msg.str());
    }
    const ModeSolution& ms = modes.front();
    const ContactMode mode = ms.mode;
    if (prev_double_slip && (mode.first == Letter::F || mode.second == Letter::F)) {
      traj.left_double_slip = true;
    }
    prev_double_slip = b.resting[0] && b.resting[1] && mode.is_double_slip();
    for (int i = 0; i < 2; ++i) {
      if (b.resting[i] && mode.at(i) == Letter::F) b.resting[i] = false;
    }

    // Next event.
    double tau = t_end - b.t;
    enum class Cause { None, Touchdown, SlipStop };
    Cause cause = Cause::None;
    std::array<std::optional<double>, 2> touch, stop;
    for (int i = 0; i < 2; ++i) {
      if (!b.resting[i]) {
        touch[i] = touchdown_time(b.q[i], b.dq[i], ms.qdd[i]);
      } else if (is_slip(mode.at(i))) {
        const double vt = tangential_velocity(tab_, b.dq, i);
        const double at = ms.ddx(i);
        if (vt * at < 0) stop[i] = -vt / at;
      }
      if (touch[i] && *touch[i] < tau) tau = *touch[i], cause = Cause::Touchdown;
      if (stop[i] && *stop[i] < tau) tau = *stop[i], cause = Cause::SlipStop;
    }
    tau = std::max(tau, 0.0);

    Segment seg;
    seg.mode = mode;
    seg.t_start = b.t;
    seg.t_end = b.t + tau;
    seg.q0 = b.q;
    seg.dq0 = b.dq;
    seg.qdd = ms.qdd;
    if (tau > 0) traj.segments.push_back(seg);
    if (b.dq.cwiseAbs().maxCoeff() > 0 && mode.at(0) == Letter::F && !b.resting[0] &&
        b.dq[0] > 0 && ms.qdd[0] < 0 && -b.dq[0] / ms.qdd[0] <= tau) {
      const double ta = -b.dq[0] / ms.qdd[0];
      traj.peaks.push_back({b.t + ta, 0, b.q[0] + 0.5 * b.dq[0] * ta});
    }
    if (!b.resting[1] && b.dq[1] > 0 && ms.qdd[1] < 0 && -b.dq[1] / ms.qdd[1] <= tau) {
      const double ta = -b.dq[1] / ms.qdd[1];
      traj.peaks.push_back({b.t + ta, 1, b.q[1] + 0.5 * b.dq[1] * ta});
    }

    b.q += b.dq * tau + 0.5 * ms.qdd * tau * tau;
    b.dq += ms.qdd * tau;
    b.t += tau;
    for (int i = 0; i < 2; ++i) {
      if (b.resting[i]) b.q[i] = 0, b.dq[i] = 0;
    }

    stalled = tau <= opts.t_min ? stalled + 1 : 0;
    if (stalled > 64) {
      std::ostringstream msg;
      msg << "events accumulate without progress at t = " << b.t;
      throw Error(ErrorKind::EventStall, msg.str());
    }

    // Divergence: Delta is largest at a segment end or at an apex.
    double seg_delta = delta_metric(b.state());
    for (const Peak& p : traj.peaks) {
      if (p.t >= seg.t_start && p.t <= seg.t_end) {
        seg_delta = std::max(seg_delta, std::sqrt(std::max(p.z, 0.0)));
      }
    }
    if (seg_delta > traj.delta_stop) {
      traj.terminal = Terminal::Diverged;
      break;
    }

    if (cause == Cause::None) {
      traj.terminal = Terminal::TimeOut;
      break;
    }

    const double window = std::max(opts.t_min, 1e-12 * std::abs(b.t));
    std::array<bool, 2> impacting{false, false};
    for (int i = 0; i < 2; ++i) {
      if (touch[i] && *touch[i] <= tau + window) {
        impacting[i] = true;
        b.q[i] = 0;
      }
    }
    if (impacting[0] || impacting[1]) {
      const bool section = do_impact(impacting);
      (void)section;
      if (records.size() >= static_cast<std::size_t>(opts.zeno_window)) {
        const auto zeno = detect_zeno(
            std::span<const ImpactRecord>(records).last(opts.zeno_window),
            ZenoParams{opts.zeno_window, v_zeno});
        if (zeno) {
          Event ev;
          ev.kind = EventKind::ZenoPoint;
          ev.pre = b.state();
          b.t = std::max(zeno->t, b.t);
          b.q = Vec3(0, 0, zeno->x2);
          b.dq = Vec3(0, 0, std::abs(zeno->dx2) <= v_zeno ? 0.0 : zeno->dx2);
          b.resting = {true, true};
          ev.t = b.t;
          ev.post = b.state();
          traj.events.push_back(ev);
          traj.zeno = true;
          records.clear();
          ++n_events;
          if (opts.stop_at_zeno) {
            traj.terminal = Terminal::ZenoTruncated;
            break;
          }
        }
      }
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      if (stop[i] && *stop[i] <= tau + window) {
        zero_tangential_velocity(tab_, b.dq, i);
        Event ev;
        ev.t = b.t;
        ev.kind = EventKind::ModeSwitch;
        ev.contact = i;
        ev.pre = ev.post = b.state();
        traj.events.push_back(ev);
        ++n_events;
        break;
      }
    }
  }
  traj.final_state = b.state();
  return traj;
}

Trajectory simulate(const Configuration& cfg, const ContactState& initial,
                    const SimOptions& opts) {
  return Simulator(cfg).run(initial, opts);
}

}  // namespace twocontact
