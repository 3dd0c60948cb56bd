// twocontact: classify, map, simulate and sweep planar two-contact equilibria.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twocontact/app.hpp"

using namespace twocontact;

namespace {

void add_map_options(CLI::App* cmd, RGOptions& rg) {
  cmd->add_option("--grid", rg.grid, "uniform phi samples before refinement")
      ->check(CLI::Range(3, 1000001));
  cmd->add_option("--edge", rg.edge, "distance of the grid ends from +-pi/2 (rad)")
      ->check(CLI::Range(1e-9, 0.5));
  cmd->add_option("--refine", rg.refine, "local refinement factor")->check(CLI::Range(1, 1000));
  cmd->add_option("--jump", rg.jump, "R jump between neighbours that triggers refinement (rad)");
  cmd->add_option("--tol-fp", rg.tol_fp, "fixed-point bisection tolerance (rad)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--margin", rg.margin, "robustness band for verdict inequalities")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--fit-tol", rg.fit_tol, "endpoint fit residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--endpoint-eps", rg.endpoint_eps, "endpoint probe distances (rad)");
  cmd->add_option("--threads", rg.threads, "OpenMP threads, 0 for the default")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability of planar rigid bodies on two frictional contacts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand subcommand help");

  ClassifyRequest classify;
  auto* c = app.add_subcommand("classify", "equilibrium classification and stability verdict (JSON)");
  c->add_option("config", classify.config_path, "configuration JSON")->required();
  c->add_option("-o,--output", classify.output, "report path (default stdout)");
  add_map_options(c, classify.rg);

  MapRequest map;
  auto* m = app.add_subcommand("map", "sampled return map R and growth map G (CSV)");
  m->add_option("config", map.config_path, "configuration JSON")->required();
  m->add_option("-o,--output", map.output, "CSV path (default stdout)");
  add_map_options(m, map.rg);

  SimulateRequest sim;
  std::string kind = "lift2";
  std::vector<double> velocity;
  auto* s = app.add_subcommand("simulate", "event-driven simulation from a perturbation");
  s->add_option("config", sim.config_path, "configuration JSON")->required();
  const std::map<std::string, PerturbationKind> kinds{{"lift1", PerturbationKind::LiftFoot1},
                                                      {"lift2", PerturbationKind::LiftFoot2},
                                                      {"velocity", PerturbationKind::Velocity},
                                                      {"random", PerturbationKind::Random}};
  s->add_option("--perturbation", kind, "lift1, lift2, velocity or random")
      ->check(CLI::IsMember({"lift1", "lift2", "velocity", "random"}));
  s->add_option("--scale", sim.perturbation.scale, "lift height (m) or speed (m/s)")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--velocity", velocity, "dz1 dz2 dx2 for --perturbation velocity (m/s)")
      ->expected(3);
  s->add_option("--count", sim.count, "number of runs")->check(CLI::PositiveNumber);
  s->add_option("--seed", sim.seed, "random seed for random perturbations");
  s->add_option("--t-max", sim.sim.t_max, "time limit (s)")->check(CLI::PositiveNumber);
  s->add_option("--max-events", sim.sim.max_events, "event budget");
  s->add_option("--divergence-factor", sim.sim.divergence_factor,
                "stop when Delta exceeds this multiple of its initial value");
  s->add_option("--sample-period", sim.sample_period, "periodic CSV rows (s), 0 for events only");
  s->add_option("--out-dir", sim.out_dir, "write trajectory CSVs and summary.json here");
  sim.sim.t_max = 1000.0;

  SweepRequest sweep;
  auto* w = app.add_subcommand("sweep", "biped stability map over the CoM grid");
  w->add_option("--biped", sweep.biped_path, "biped description JSON (default built-in)");
  w->add_option("--mu1", sweep.mu1s, "friction coefficients of the uphill foot");
  w->add_option("--out-dir", sweep.out_dir, "output directory");
  w->add_option("--curve-points", sweep.curve.points, "points per (G*)^2 curve")
      ->check(CLI::Range(2, 100000));
  w->add_option("--curve-shift-lo", sweep.curve.shift_lo, "curve start, cylinder shift (m)");
  w->add_option("--curve-shift-hi", sweep.curve.shift_hi, "curve end, cylinder shift (m)");
  w->add_option("--curve-legs", sweep.curve_leg_lengths, "leg lengths for curves (m)");
  add_map_options(w, sweep.rg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (*c) return run_classify(classify, std::cout, std::cerr);
  if (*m) return run_map(map, std::cout, std::cerr);
  if (*s) {
    sim.perturbation.kind = kinds.at(kind);
    if (sim.perturbation.kind == PerturbationKind::Velocity) {
      if (velocity.size() != 3) {
        std::cerr << "error: --perturbation velocity needs --velocity dz1 dz2 dx2\n";
        return kExitInputError;
      }
      sim.perturbation.velocity = Vec3(velocity[0], velocity[1], velocity[2]);
    }
    return run_simulate(sim, std::cout, std::cerr);
  }
  sweep.threads = sweep.rg.threads;
  return run_sweep(sweep, std::cout, std::cerr);
}
