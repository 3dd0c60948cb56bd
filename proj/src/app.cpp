#include "twocontact/app.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "json.hpp"

namespace twocontact {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json state_json(const ContactState& s) {
  return {{"t", s.t},     {"z1", s.z1},   {"z2", s.z2},  {"x2", s.x2},
          {"dz1", s.dz1}, {"dz2", s.dz2}, {"dx2", s.dx2}};
}

json fixed_point_json(const FixedPoint& fp) {
  return {{"phi", fp.phi},
          {"G", fp.G},
          {"slope", fp.slope},
          {"stability", to_string(fp.stability)}};
}

json endpoint_json(const EndpointRecord& e) {
  json j{{"side", e.side > 0 ? "+pi/2" : "-pi/2"},
         {"set", to_string(e.set)},
         {"attractive", e.attractive()},
         {"fit_residual", e.fit_residual}};
  if (e.set == EndpointSet::Set1) {
    j["G_pm"] = e.G_pm;
    j["Rprime"] = e.Rprime;
    j["rprime_residual"] = e.rprime_residual;
  } else if (e.set == EndpointSet::Set2) {
    j["R_pm"] = e.R_pm;
    j["G_eps_limit"] = e.G_eps_limit;
    j["tan_R_pm"] = e.tan_R_pm;
    j["identity_residual"] = e.identity_residual;
  }
  json probes = json::array();
  for (const EndpointProbe& p : e.probes) {
    probes.push_back({{"eps", p.eps}, {"R", opt(p.sample.r)}, {"G", opt(p.sample.g)}});
  }
  j["probes"] = probes;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

json partition_json(const Partition& p) {
  json iv = json::array();
  for (const PartitionInterval& i : p.intervals) {
    json labels = json::array();
    if (i.safe) labels.push_back("Safe");
    if (i.transient) labels.push_back("Transient");
    iv.push_back({{"lo", i.lo},
                  {"hi", i.hi},
                  {"labels", labels},
                  {"sign", i.sign},
                  {"max_G", i.max_G},
                  {"on_cycle", i.on_cycle}});
  }
  json edges = json::array();
  for (const auto& [a, b] : p.edges) edges.push_back({a, b});
  return {{"breakpoints", p.breakpoints},
          {"intervals", iv},
          {"edges", edges},
          {"extremalCutApplied", p.extremalCutApplied}};
}

int input_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kExitInputError;
}

bool is_input_error(const Error& e) {
  return e.kind() == ErrorKind::InvalidConfiguration || e.kind() == ErrorKind::Io ||
         e.kind() == ErrorKind::DegenerateGeometry;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, path.string() + ": cannot write file");
  f << content;
}

std::string format_value(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

SweepCell analyze_cell(const BipedSpec& spec, double mu1, int leg, int hole,
                       const RGOptions& rg) {
  SweepCell cell;
  cell.mu1 = mu1;
  cell.leg = leg;
  cell.hole = hole;
  cell.leg_length = spec.leg_length;
  try {
    const Configuration cfg = biped_to_configuration(spec);
    cell.x_c = -cfg.l1;
    cell.z_c = cfg.h;
    const Analysis a = analyze(cfg, rg);
    cell.verdict = a.verdict.verdict;
    cell.justification = a.verdict.justification;
    std::optional<FixedPoint> fp;
    if (a.map) fp = dominant_fixed_point(*a.map);
    if (!fp) fp = a.verdict.witness;
    if (fp) cell.Gstar = fp->G;
  } catch (const std::exception& e) {
    cell.verdict = Verdict::Inconclusive;
    cell.error = e.what();
  }
  return cell;
}

// Ordered map over independent jobs; results land at their own index, so the
// output does not depend on the schedule.
template <class Job>
std::vector<SweepCell> map_cells(const std::vector<Job>& jobs, bool parallel, int threads) {
  std::vector<SweepCell> out(jobs.size());
  const long n = static_cast<long>(jobs.size());
  if (!parallel) {
    for (long k = 0; k < n; ++k) out[k] = jobs[k]();
    return out;
  }
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long k = 0; k < n; ++k) out[k] = jobs[k]();
  return out;
}

}  // namespace

// --- classify ---------------------------------------------------------------

std::string analysis_to_json(const Analysis& a) {
  const StabilityVerdict& v = a.verdict;
  json j;
  j["configuration"] = json::parse(configuration_to_json(a.cfg));
  j["equilibrium"] = {{"isEquilibrium", a.eq.isEquilibrium},
                      {"isAmbiguous", a.eq.isAmbiguous},
                      {"ambiguityWitness", a.eq.ambiguityWitness
                                               ? json(a.eq.ambiguityWitness->name())
                                               : json(nullptr)},
                      {"isPainleveFree", a.eq.isPainleveFree},
                      {"isPersistent", a.eq.isPersistent},
                      {"isWeaklyPersistent", a.eq.isWeaklyPersistent},
                      {"marginal", a.eq.marginal},
                      {"margin", a.eq.margin}};
  j["verdict"] = to_string(v.verdict);
  j["justification"] = to_string(v.justification);
  j["exit_code"] = exit_code(v.verdict);
  j["witness"] = v.witness ? fixed_point_json(*v.witness) : json(nullptr);
  j["ambiguity"] = v.ambiguity ? json(v.ambiguity->name()) : json(nullptr);
  j["partition"] = v.partition ? partition_json(*v.partition) : json(nullptr);
  j["notes"] = v.notes;
  j["grid_samples"] = v.grid_samples;
  if (a.map) {
    json fps = json::array();
    for (const FixedPoint& fp : a.map->fixedPoints) fps.push_back(fixed_point_json(fp));
    j["fixed_points"] = fps;
    j["endpoints"] = {endpoint_json(a.map->endpointMinus), endpoint_json(a.map->endpointPlus)};
    j["max_G"] = opt(a.map->max_G());
  }
  return j.dump(2) + "\n";
}

int run_classify(const ClassifyRequest& req, std::ostream& out, std::ostream& err) {
  Configuration cfg;
  try {
    cfg = load_configuration(req.config_path);
  } catch (const Error& e) {
    return input_error(err, e);
  }
  try {
    const Analysis a = analyze(cfg, req.rg);
    const std::string report = analysis_to_json(a);
    if (req.output.empty()) {
      out << report;
    } else {
      write_file(req.output, report);
    }
    err << to_string(a.verdict.verdict) << " (" << to_string(a.verdict.justification) << ")\n";
    return exit_code(a.verdict.verdict);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e) ? kExitInputError : kExitModelFailure;
  }
}

// --- map --------------------------------------------------------------------

int run_map(const MapRequest& req, std::ostream& out, std::ostream& err) {
  Configuration cfg;
  try {
    cfg = load_configuration(req.config_path);
  } catch (const Error& e) {
    return input_error(err, e);
  }
  try {
    const RGMap map = build_rg_map(cfg, req.rg);
    if (req.output.empty()) {
      write_rgmap_csv(out, map);
    } else {
      std::ofstream f(req.output);
      if (!f) throw Error(ErrorKind::Io, req.output + ": cannot write file");
      write_rgmap_csv(f, map);
    }
    for (const FixedPoint& fp : map.fixedPoints) {
      err << "fixed point phi=" << fp.phi << " G=" << fp.G << " slope=" << fp.slope << " ("
          << to_string(fp.stability) << ")\n";
    }
    for (const EndpointRecord* e : {&map.endpointMinus, &map.endpointPlus}) {
      err << "endpoint " << (e->side > 0 ? "+" : "-") << "pi/2: " << to_string(e->set) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e) ? kExitInputError : kExitModelFailure;
  }
}

// --- simulate ---------------------------------------------------------------

ContactState make_initial_state(const Configuration& cfg, const Perturbation& p,
                                std::mt19937_64& rng) {
  (void)cfg;
  ContactState s;
  switch (p.kind) {
    case PerturbationKind::LiftFoot1: s.z1 = p.scale; break;
    case PerturbationKind::LiftFoot2: s.z2 = p.scale; break;
    case PerturbationKind::Velocity:
      s.dz1 = p.velocity[0];
      s.dz2 = p.velocity[1];
      s.dx2 = p.velocity[2];
      break;
    case PerturbationKind::Random: {
      std::normal_distribution<double> n(0.0, 1.0);
      Vec3 v(n(rng), n(rng), n(rng));
      v = p.scale * v.normalized();
      s.dz1 = std::abs(v[0]);
      s.dz2 = std::abs(v[1]);
      s.dx2 = v[2];
      break;
    }
  }
  return s;
}

SimulationSummary summarize(const Trajectory& traj, const ContactState& initial) {
  SimulationSummary s;
  s.initial = initial;
  s.terminal = traj.terminal;
  s.events = traj.events.size();
  s.impacts = traj.impacts().size();
  s.zeno = traj.zeno;
  const FtlsMetrics m = metrics(traj);
  s.t_f = m.t_f;
  s.Delta_max = m.Delta_max;
  s.D_max = m.D_max;
  s.d_max = m.d_max;
  s.speed_ratio = fitted_speed_ratio(traj);
  s.peak_ratio = fitted_peak_ratio(traj);
  s.final_state = traj.final_state;
  return s;
}

std::string summary_to_json(const std::vector<SimulationSummary>& runs) {
  json arr = json::array();
  for (const SimulationSummary& s : runs) {
    arr.push_back({{"initial", state_json(s.initial)},
                   {"terminal", to_string(s.terminal)},
                   {"t_f", s.t_f},
                   {"events", s.events},
                   {"impacts", s.impacts},
                   {"zeno", s.zeno},
                   {"Delta_max", s.Delta_max},
                   {"D_max", s.D_max},
                   {"d_max", s.d_max},
                   {"speed_ratio", opt(s.speed_ratio)},
                   {"peak_ratio", opt(s.peak_ratio)},
                   {"final_state", state_json(s.final_state)}});
  }
  return json{{"runs", arr}}.dump(2) + "\n";
}

int run_simulate(const SimulateRequest& req, std::ostream& out, std::ostream& err) {
  Configuration cfg;
  try {
    cfg = load_configuration(req.config_path);
  } catch (const Error& e) {
    return input_error(err, e);
  }
  if (req.count < 1) {
    err << "error: --count must be at least 1\n";
    return kExitInputError;
  }
  try {
    const Simulator sim(cfg);
    std::mt19937_64 rng(req.seed);
    std::vector<SimulationSummary> runs;
    if (!req.out_dir.empty()) fs::create_directories(req.out_dir);
    for (int k = 0; k < req.count; ++k) {
      const ContactState init = make_initial_state(cfg, req.perturbation, rng);
      const Trajectory traj = sim.run(init, req.sim);
      runs.push_back(summarize(traj, init));
      if (!req.out_dir.empty()) {
        char name[64];
        if (req.count == 1) {
          std::snprintf(name, sizeof name, "trajectory.csv");
        } else {
          std::snprintf(name, sizeof name, "trajectory_%03d.csv", k);
        }
        std::ofstream f(fs::path(req.out_dir) / name);
        if (!f) throw Error(ErrorKind::Io, req.out_dir + ": cannot write trajectory");
        write_trajectory_csv(f, traj, req.sample_period);
      }
      err << "run " << k << ": " << to_string(traj.terminal) << " after " << traj.events.size()
          << " events, t_f = " << runs.back().t_f << '\n';
    }
    const std::string summary = summary_to_json(runs);
    if (req.out_dir.empty()) {
      out << summary;
    } else {
      write_file(fs::path(req.out_dir) / "summary.json", summary);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e) ? kExitInputError : kExitModelFailure;
  }
}

// --- sweep ------------------------------------------------------------------

std::vector<SweepCell> sweep_grid(const BipedFile& biped, const std::vector<double>& mu1s,
                                  const RGOptions& rg, bool parallel, int threads) {
  RGOptions inner = rg;
  inner.parallel = false;
  std::vector<std::function<SweepCell()>> jobs;
  for (double mu1 : mu1s) {
    BipedSpec base = biped.spec;
    base.mu1 = mu1;
    for (int leg = 0; leg < static_cast<int>(biped.grid.leg_lengths.size()); ++leg) {
      for (int hole = 0; hole < biped.grid.holes; ++hole) {
        const BipedSpec spec = grid_cell(base, biped.grid, hole, leg);
        jobs.emplace_back([spec, mu1, leg, hole, inner] {
          return analyze_cell(spec, mu1, leg, hole, inner);
        });
      }
    }
  }
  return map_cells(jobs, parallel, threads);
}

std::vector<SweepCell> growth_curve(const BipedFile& biped, double mu1, double leg_length,
                                    const CurveRequest& curve, const RGOptions& rg,
                                    bool parallel, int threads) {
  RGOptions inner = rg;
  inner.parallel = false;
  std::vector<std::function<SweepCell()>> jobs;
  for (int k = 0; k < curve.points; ++k) {
    const double t = curve.points == 1 ? 0.0 : static_cast<double>(k) / (curve.points - 1);
    BipedSpec spec = biped.spec;
    spec.mu1 = mu1;
    spec.leg_length = leg_length;
    spec.cylinder_positions[biped.grid.moving_cylinder] +=
        curve.shift_lo + t * (curve.shift_hi - curve.shift_lo);
    jobs.emplace_back([spec, mu1, k, inner] { return analyze_cell(spec, mu1, 0, k, inner); });
  }
  return map_cells(jobs, parallel, threads);
}

std::vector<double> unit_crossings(const std::vector<SweepCell>& curve) {
  std::vector<double> out;
  const SweepCell* prev = nullptr;
  for (const SweepCell& c : curve) {
    if (!c.Gstar) continue;
    if (prev) {
      const double a = *prev->Gstar * *prev->Gstar - 1, b = *c.Gstar * *c.Gstar - 1;
      if ((a < 0) != (b < 0)) out.push_back(prev->x_c + (c.x_c - prev->x_c) * a / (a - b));
    }
    prev = &c;
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "x_c,z_c,verdict,justification,Gstar2,mu1,leg_length,leg,hole,error\n";
  const auto old = out.precision(12);
  for (const SweepCell& c : cells) {
    out << c.x_c << ',' << c.z_c << ',' << (c.error.empty() ? to_string(c.verdict) : "Error")
        << ',' << to_string(c.justification) << ',';
    if (c.Gstar) out << *c.Gstar * *c.Gstar;
    out << ',' << c.mu1 << ',' << c.leg_length << ',' << c.leg << ',' << c.hole << ',';
    std::string e = c.error;
    for (char& ch : e) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << e << '\n';
  }
  out.precision(old);
}

int run_sweep(const SweepRequest& req, std::ostream& out, std::ostream& err) {
  BipedFile biped;
  try {
    if (!req.biped_path.empty()) biped = load_biped(req.biped_path);
  } catch (const Error& e) {
    return input_error(err, e);
  }
  if (req.mu1s.empty()) {
    err << "error: at least one mu1 value is required\n";
    return kExitInputError;
  }
  try {
    fs::create_directories(req.out_dir);
    const std::vector<SweepCell> cells = sweep_grid(biped, req.mu1s, req.rg, true, req.threads);
    const std::size_t per_mu = cells.size() / req.mu1s.size();
    json meta;
    meta["grid"] = json::parse(biped_to_json(biped));
    meta["mu1"] = req.mu1s;
    json sweeps = json::array(), curves = json::array();
    for (std::size_t m = 0; m < req.mu1s.size(); ++m) {
      const std::vector<SweepCell> part(cells.begin() + m * per_mu,
                                        cells.begin() + (m + 1) * per_mu);
      const std::string name = "sweep_mu1_" + format_value(req.mu1s[m], 6) + ".csv";
      std::ostringstream csv;
      write_sweep_csv(csv, part);
      write_file(fs::path(req.out_dir) / name, csv.str());
      std::size_t errors = 0;
      for (const SweepCell& c : part) errors += !c.error.empty();
      sweeps.push_back({{"mu1", req.mu1s[m]}, {"file", name}, {"cells", part.size()},
                        {"errors", errors}});
      err << name << ": " << part.size() << " cells, " << errors << " errors\n";

      const std::vector<double> legs =
          req.curve_leg_lengths.empty() ? biped.grid.leg_lengths : req.curve_leg_lengths;
      for (double leg : legs) {
        const std::vector<SweepCell> curve =
            growth_curve(biped, req.mu1s[m], leg, req.curve, req.rg, true, req.threads);
        const std::string cname = "curve_mu1_" + format_value(req.mu1s[m], 6) + "_legs_" +
                                  format_value(leg * 1e3, 6) + "mm.csv";
        std::ostringstream ccsv;
        write_sweep_csv(ccsv, curve);
        write_file(fs::path(req.out_dir) / cname, ccsv.str());
        curves.push_back({{"mu1", req.mu1s[m]},
                          {"leg_length", leg},
                          {"file", cname},
                          {"crossings_x_c", unit_crossings(curve)}});
      }
    }
    meta["sweeps"] = sweeps;
    meta["curves"] = curves;
    const std::string summary = meta.dump(2) + "\n";
    write_file(fs::path(req.out_dir) / "sweep_summary.json", summary);
    out << summary;
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e) ? kExitInputError : kExitModelFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace twocontact
