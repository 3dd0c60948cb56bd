#pragma once

// Command implementations behind the twocontact tool. Each run_* function
// returns the process exit code:
//   0 stable, 1 unstable, 2 input error, 3 inconclusive or degenerate or a
//   model failure, 4 no equilibrium.
// simulate, map and sweep return 0 on success.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twocontact/biped.hpp"
#include "twocontact/config_io.hpp"
#include "twocontact/simulator.hpp"
#include "twocontact/verdict.hpp"

namespace twocontact {

inline constexpr int kExitInputError = 2;
inline constexpr int kExitModelFailure = 3;

// --- classify ---------------------------------------------------------------

std::string analysis_to_json(const Analysis& a);

struct ClassifyRequest {
  std::string config_path;
  RGOptions rg;
  std::string output;  // report path, empty for stdout
};
int run_classify(const ClassifyRequest& req, std::ostream& out, std::ostream& err);

// --- map --------------------------------------------------------------------

struct MapRequest {
  std::string config_path;
  RGOptions rg;
  std::string output;  // CSV path, empty for stdout
};
int run_map(const MapRequest& req, std::ostream& out, std::ostream& err);

// --- simulate ---------------------------------------------------------------

enum class PerturbationKind : std::uint8_t { LiftFoot1, LiftFoot2, Velocity, Random };

struct Perturbation {
  PerturbationKind kind = PerturbationKind::LiftFoot2;
  double scale = 1e-4;      // lift height in m, or speed in m/s
  Vec3 velocity = Vec3::Zero();  // (dz1, dz2, dx2) for Velocity
};

// Initial state of a perturbation. Random draws a velocity of norm `scale`
// in a uniformly random direction, with the normal components made
// non-negative so that both feet start on the ground or leaving it.
ContactState make_initial_state(const Configuration& cfg, const Perturbation& p,
                                std::mt19937_64& rng);

struct SimulationSummary {
  ContactState initial;
  Terminal terminal = Terminal::TimeOut;
  double t_f = 0;
  std::size_t events = 0;
  std::size_t impacts = 0;
  bool zeno = false;
  double Delta_max = 0, D_max = 0, d_max = 0;
  std::optional<double> speed_ratio;  // fitted per-cycle ratio of |dz2-|
  std::optional<double> peak_ratio;   // fitted ratio of consecutive apexes of z2
  ContactState final_state;
};

SimulationSummary summarize(const Trajectory& traj, const ContactState& initial);
std::string summary_to_json(const std::vector<SimulationSummary>& runs);

struct SimulateRequest {
  std::string config_path;
  Perturbation perturbation;
  SimOptions sim;
  int count = 1;            // number of runs (random perturbations differ per run)
  std::uint64_t seed = 1;
  double sample_period = 0;  // periodic CSV rows, 0 for events only
  std::string out_dir;       // trajectory CSVs and summary.json; empty: summary to stdout
};
int run_simulate(const SimulateRequest& req, std::ostream& out, std::ostream& err);

// --- sweep ------------------------------------------------------------------

struct SweepCell {
  double mu1 = 0;
  int leg = 0, hole = 0;
  double leg_length = 0;
  double x_c = 0;  // CoM ahead of the uphill foot along the slope, m
  double z_c = 0;  // CoM height above the contact line, m
  Verdict verdict = Verdict::Inconclusive;
  Justification justification = Justification::None;
  std::optional<double> Gstar;  // growth ratio of the dominant fixed point
  std::string error;            // non-empty when the cell failed
};

// Cells in row-major order (mu1, leg, hole).
std::vector<SweepCell> sweep_grid(const BipedFile& biped, const std::vector<double>& mu1s,
                                  const RGOptions& rg, bool parallel, int threads = 0);

// (G*)^2 along a continuous shift of the moving cylinder at a fixed leg length.
struct CurveRequest {
  double shift_lo = -0.12, shift_hi = 0.03;  // m, relative to the base position
  int points = 61;
};
std::vector<SweepCell> growth_curve(const BipedFile& biped, double mu1, double leg_length,
                                    const CurveRequest& curve, const RGOptions& rg,
                                    bool parallel, int threads = 0);

// x_c values where (G*)^2 crosses 1, by linear interpolation between
// consecutive defined points.
std::vector<double> unit_crossings(const std::vector<SweepCell>& curve);

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

struct SweepRequest {
  std::string biped_path;  // empty: built-in biped
  std::vector<double> mu1s{0.315};
  RGOptions rg;
  CurveRequest curve;
  std::vector<double> curve_leg_lengths;  // empty: every grid leg length
  std::string out_dir = ".";
  int threads = 0;
};
int run_sweep(const SweepRequest& req, std::ostream& out, std::ostream& err);

}  // namespace twocontact
