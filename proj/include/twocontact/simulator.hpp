#pragma once

// Event-driven simulation of the zero-order dynamics. Within a contact mode
// the accelerations are constant, so every segment is an exact quadratic and
// every event time is the root of a linear or quadratic polynomial.

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twocontact/consistency.hpp"
#include "twocontact/impact.hpp"
#include "twocontact/model.hpp"

namespace twocontact {

struct Segment {
  ContactMode mode;
  double t_start = 0, t_end = 0;
  Vec3 q0 = Vec3::Zero(), dq0 = Vec3::Zero(), qdd = Vec3::Zero();

  double duration() const { return t_end - t_start; }
  ContactState at(double t) const;
};

enum class EventKind : std::uint8_t { Impact, ModeSwitch, ZenoPoint, Stop };

const char* to_string(EventKind k) noexcept;

struct Event {
  double t = 0;
  EventKind kind = EventKind::Impact;
  // Impacting contact (0 or 1), 2 for a double impact; for a ModeSwitch the
  // contact whose slip velocity vanished, -1 otherwise.
  int contact = -1;
  ContactState pre, post;
  std::optional<ImpactOutcome> impact;
  // Impact of contact 2 while contact 1 rests: a crossing of the section.
  bool section = false;
  double phi = 0;  // impact angle atan(dx2- / |dz2-|) at a section crossing
};

enum class Terminal : std::uint8_t {
  Equilibrium,
  ZenoTruncated,
  Diverged,
  TimeOut,
  SectionReached,
};

const char* to_string(Terminal t) noexcept;

struct Peak {
  double t = 0;
  int contact = 0;
  double z = 0;
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<Event> events;
  std::vector<Peak> peaks;
  Terminal terminal = Terminal::TimeOut;
  ContactState final_state;
  double speed_scale = 0;   // characteristic speed of the initial state
  double delta_stop = 0;    // divergence threshold used
  bool budget_exhausted = false;
  // Liftoff from a two-contact slip (a transition only possible near a
  // non-persistent equilibrium).
  bool left_double_slip = false;
  bool slipping_double_impact = false;
  int slipping_double_sign = 0;
  bool zeno = false;

  // Mode words of consecutive segments and impacts, e.g. "FS I1 SF I2 FS".
  std::vector<std::string> mode_words() const;
  std::vector<const Event*> impacts() const;
  std::vector<const Event*> section_crossings() const;
};

struct SimOptions {
  double t_max = 10.0;             // s
  std::size_t max_events = 20000;
  double divergence_factor = 1e3;  // stop when Delta exceeds this x initial Delta
  int zeno_window = 8;
  double zeno_speed_factor = 1e-7; // v_zeno relative to the initial speed scale
  double t_min = 1e-12;            // s, simultaneity window for events
  double tol_rel = 1e-9;
  bool stop_at_zeno = false;
  bool stop_at_section = false;    // stop at the first section crossing after t0
};

// Distance metric max(sqrt z1, sqrt z2, sqrt|x2|, |dz1|, |dz2|, |dx2|).
double delta_metric(const ContactState& s);
// Pseudo-metrics without x2 (D) and additionally without dx2 (d).
double big_d_metric(const ContactState& s);
double small_d_metric(const ContactState& s);

class Simulator {
 public:
  explicit Simulator(const Configuration& cfg);
  Simulator(const Configuration& cfg, const ZodTableau& tab);

  Trajectory run(const ContactState& initial, const SimOptions& opts = {}) const;

  const Configuration& configuration() const { return cfg_; }
  const ZodTableau& tableau() const { return tab_; }
  const ModeTable& modes() const { return table_; }

 private:
  Configuration cfg_;
  ZodTableau tab_;
  ModeTable table_;
};

Trajectory simulate(const Configuration& cfg, const ContactState& initial,
                    const SimOptions& opts = {});

// --- Zeno detection ---------------------------------------------------------

struct ImpactRecord {
  double t = 0;
  double speed = 0;   // normal approach speed of the impacting contact
  double x2 = 0;      // post-impact state used for extrapolation
  double dx2 = 0;
};

struct ZenoParams {
  int window = 8;
  double v_zeno = 0;  // predicted next impact speed must fall below this
};

struct ZenoPoint {
  double t = 0;      // accumulation time
  double ratio = 0;  // per-cycle (two-impact) decay ratio
  double x2 = 0;
  double dx2 = 0;
};

// Detects a geometrically decaying impact sequence over the last
// params.window records and extrapolates its accumulation point.
std::optional<ZenoPoint> detect_zeno(std::span<const ImpactRecord> recent,
                                     const ZenoParams& params);

// --- Metrics ----------------------------------------------------------------

struct MetricSample {
  double t = 0;
  double Delta = 0, D = 0, d = 0;
};

struct FtlsMetrics {
  double Delta_max = 0;
  double D_max = 0;
  double d_max = 0;
  double t_f = 0;  // time of reaching equilibrium (end time otherwise)
  std::vector<MetricSample> series;  // per-segment maxima, in time order
};

FtlsMetrics metrics(const Trajectory& traj);

// Fitted per-cycle ratio of consecutive section-crossing impact speeds
// |dz2-| (geometric mean over the last `count` crossings).
std::optional<double> fitted_speed_ratio(const Trajectory& traj,
                                         std::size_t skip = 2);
// Fitted ratio of consecutive apex heights of contact 2.
std::optional<double> fitted_peak_ratio(const Trajectory& traj,
                                        std::size_t skip = 2);

// --- Export -----------------------------------------------------------------

// CSV columns t,z1,z2,x2,dz1,dz2,dx2,mode,event: one row per event and one
// per sample period (no periodic rows when period <= 0).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          double sample_period);

}  // namespace twocontact
