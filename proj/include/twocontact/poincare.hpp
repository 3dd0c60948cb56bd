#pragma once

// Reduced return map on the impact angle. A section crossing is an impact of
// contact 2 while contact 1 rests; phi = atan(dx2- / |dz2-|). Under the ZOD
// the motion between two crossings depends only on phi (the magnitude of the
// state scales out), which gives the scalar map R and the growth ratio G of
// the normal impact speed.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twocontact/simulator.hpp"

namespace twocontact {

struct RGFlags {
  bool slippingDoubleImpact = false;
  int slipSign = 0;          // sign of dx2+ of the slipping double impact
  bool zenoExit = false;     // an impact sequence accumulated before the next crossing
  bool ssExit = false;       // came to rest without crossing the section again
  bool twoContactLiftoff = false;  // left a two-contact slip into flight
};

struct RGSample {
  double phi = 0;
  std::optional<double> r;
  std::optional<double> g;
  RGFlags flags;
  std::string reason;  // why r/g are undefined, if they are

  bool defined() const { return r.has_value() && g.has_value(); }
};

// Any evaluator of the map; the physical one is rg_eval on a Simulator, tests
// substitute synthetic maps.
using RGFunction = std::function<RGSample(double phi)>;

// One return-map evaluation. The section state has |(dz2-, dx2-)| = speed.
RGSample rg_eval(const Simulator& sim, double phi, double speed = 1.0);
RGFunction rg_function(const Simulator& sim);

enum class FixedPointStability : std::uint8_t { Attractive, Repulsive, Neutral };
const char* to_string(FixedPointStability s) noexcept;

struct FixedPoint {
  double phi = 0;
  double G = 0;
  double slope = 0;  // R'(phi*)
  FixedPointStability stability = FixedPointStability::Neutral;
};

enum class EndpointSet : std::uint8_t { Set1, Set2, Undefined, Unclassified };
const char* to_string(EndpointSet s) noexcept;

struct EndpointProbe {
  double eps = 0;  // distance of phi from the endpoint
  RGSample sample;
};

struct EndpointRecord {
  int side = 1;  // +1: phi -> pi/2, -1: phi -> -pi/2
  EndpointSet set = EndpointSet::Unclassified;
  // Set 1: R -> side*pi/2 with R' -> G_pm, G constant near the endpoint.
  double G_pm = 0;
  double Rprime = 0;          // limit of (pi/2 - side*R) / eps
  double rprime_residual = 0; // |Rprime - G_pm| / G_pm
  // Set 2: R -> R_pm inside the interval, G diverges.
  double R_pm = 0;
  double G_eps_limit = 0;     // limit of G(phi) * (pi/2 - |phi|)
  double tan_R_pm = 0;
  double identity_residual = 0;  // |G_eps_limit - tan R_pm| / max(|.|, |.|)
  double fit_residual = 0;    // convergence residual of the classifying fit
  std::vector<EndpointProbe> probes;
  std::string note;

  bool attractive() const { return set == EndpointSet::Set1 && G_pm < 1; }
  // Weak-persistence condition on the endpoint behaviour of R: R stays
  // bounded away from the endpoint, or the endpoint repels.
  bool not_attractive() const;
};

struct RGOptions {
  int grid = 2001;
  double edge = 1e-3;   // grid spans [-pi/2 + edge, pi/2 - edge]
  int refine = 10;      // local density factor near sign changes and jumps
  double jump = 0.05;   // |dR| between neighbours that counts as a jump (rad)
  double tol_fp = 1e-6;
  double margin = 1e-3;
  std::vector<double> endpoint_eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double fit_tol = 0.02;
  bool parallel = true;
  int threads = 0;  // 0: OpenMP default
};

struct RGMap {
  std::vector<RGSample> samples;  // sorted by phi
  std::vector<FixedPoint> fixedPoints;
  EndpointRecord endpointMinus, endpointPlus;

  std::optional<double> max_G() const;
  std::optional<double> min_R() const;
  std::optional<double> max_R() const;
  bool any_flag(bool RGFlags::*flag) const;
  // True when consecutive defined samples never decrease by more than
  // margin * dphi.
  bool non_decreasing(double margin) const;
  const EndpointRecord& endpoint(int side) const {
    return side > 0 ? endpointPlus : endpointMinus;
  }
};

std::vector<double> uniform_grid(int n, double edge);

// Evaluates f on every phi. The parallel version distributes the samples
// over OpenMP threads; both return identical vectors.
std::vector<RGSample> sample_serial(const RGFunction& f, const std::vector<double>& phis);
std::vector<RGSample> sample_parallel(const RGFunction& f, const std::vector<double>& phis,
                                      int threads = 0);

// Grid sampling with local refinement, fixed points and endpoint analysis.
RGMap build_rg_map(const RGFunction& f, const RGOptions& opts = {});
RGMap build_rg_map(const Configuration& cfg, const RGOptions& opts = {});

// Sign changes of R - phi refined by bisection; discontinuities are dropped.
std::vector<FixedPoint> find_fixed_points(const RGMap& map, const RGFunction& f,
                                          double tol_fp = 1e-6);

EndpointRecord endpoint_analysis(const RGFunction& f, int side,
                                 const std::vector<double>& eps, double fit_tol = 0.02);
std::pair<EndpointRecord, EndpointRecord> endpoint_analysis(const Configuration& cfg,
                                                            const RGOptions& opts = {});

// --- Partitions --------------------------------------------------------------

struct PartitionInterval {
  double lo = 0, hi = 0;
  bool safe = false;
  bool transient = false;
  int sign = 0;        // common sign of R - phi, 0 if it changes
  double max_G = 0;    // over defined samples
  bool on_cycle = false;
};

struct Partition {
  std::vector<double> breakpoints;
  std::vector<PartitionInterval> intervals;
  std::vector<std::pair<int, int>> edges;  // interval graph, no self-edges
  bool extremalCutApplied = false;

  bool stable() const;
};

// Labels the partition induced by the given breakpoints.
Partition label_partition(const RGMap& map, std::vector<double> breakpoints,
                          double margin);
std::optional<Partition> build_stable_partition(const RGMap& map, double margin = 1e-3);

void write_rgmap_csv(std::ostream& out, const RGMap& map);

}  // namespace twocontact
