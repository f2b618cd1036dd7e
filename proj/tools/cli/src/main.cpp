#include <CLI11.hpp>
#include <iostream>

#include "painleve/cli/commands.hpp"

namespace {

void add_common(CLI::App* cmd, painleve::cli::CommonOptions& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)");
  cmd->add_option("--mode", o.mode, "dynamics: rgims or classical");
  cmd->add_option("--law", o.law, "impact law: rebound, stop, max_braking or detach");
  cmd->add_option("--t-max", o.t_max, "final time [s]");
  cmd->add_option("--dt", o.dt, "integration step [s]");
  cmd->add_option("--seed", o.seed, "seed for random sweep axes");
  cmd->add_option("--out-dir", o.out_dir, "directory for output files");
  cmd->add_flag("--smooth-coulomb", o.smooth_coulomb,
                "rgims: apply Coulomb friction during smooth sliding");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace painleve::cli;
  CLI::App app{"Painleve rod: impulsive and classical contact dynamics"};
  app.require_subcommand(1);

  CommonOptions common;
  ParadoxMapOptions map;
  SweepOptions sweep;

  auto* sim = app.add_subcommand("simulate", "integrate a trajectory, write CSV and JSONL");
  add_common(sim, common);
  auto* imp = app.add_subcommand("impact", "apply the impact law to the initial state");
  add_common(imp, common);
  auto* pm = app.add_subcommand("paradox-map", "classify a theta x mu grid, print critical mu");
  add_common(pm, common);
  pm->add_option("--theta", map.theta, "theta values: list or start:stop:count");
  pm->add_option("--mu", map.mu, "mu values: list or start:stop:count");
  pm->add_option("--slip-sign", map.slip_sign, "slip sign, +1 or -1");
  pm->add_option("--thetadot", map.thetadot, "angular velocity fixing the sign of c");
  pm->add_option("--threads", map.threads, "worker threads (0 = all cores)");
  auto* sw = app.add_subcommand("sweep", "run a Cartesian product of parameter values");
  add_common(sw, common);
  sw->add_option("--axis", sweep.axes, "name=values, repeatable");
  sw->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (*sim) return cmd_simulate(common, std::cout, std::cerr);
  if (*imp) return cmd_impact(common, std::cout, std::cerr);
  if (*pm) return cmd_paradox_map(common, map, std::cout, std::cerr);
  return cmd_sweep(common, sweep, std::cout, std::cerr);
}
