#include "painleve/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "painleve/cli/output.hpp"
#include "painleve/cli/sweep.hpp"
#include "painleve/classical.hpp"
#include "painleve/errors.hpp"

namespace painleve::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const CommonOptions& opts, const std::string& name) {
  const fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

json state_json(const State& s) {
  return {{"t", s.config.t},       {"x", s.config.x},   {"y", s.config.y},
          {"theta", s.config.theta}, {"xdot", s.vel.dx}, {"ydot", s.vel.dy},
          {"thetadot", s.vel.dtheta}};
}

}  // namespace

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig cfg = opts.config ? load_config(*opts.config) : RunConfig{};
  if (opts.mode) cfg.mode = parse_mode(*opts.mode);
  if (opts.law) cfg.law_family = parse_law_family(*opts.law);
  if (opts.t_max) cfg.t_max = *opts.t_max;
  if (opts.dt) cfg.dt = *opts.dt;
  if (opts.smooth_coulomb) cfg.smooth_coulomb = true;
  cfg.validate();
  return cfg;
}

int cmd_simulate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Trajectory traj;
  try {
    cfg = resolve_config(opts);
    traj = run(cfg.initial, cfg.params, cfg.settings());
    auto tf = open_output(opts, cfg.output.trajectory);
    write_trajectory_csv(tf, traj);
    auto ef = open_output(opts, cfg.output.events);
    write_events_jsonl(ef, traj);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  out << summary_json(summarize(traj)) << '\n';
  switch (traj.status) {
    case RunStatus::Completed: return kExitOk;
    case RunStatus::RodFlat:
      err << "run stopped: rod lies flat on the line at t=" << traj.samples.back().state.config.t
          << '\n';
      return kExitOk;
    case RunStatus::ParadoxEncountered:
      err << "ParadoxEncountered at t=" << traj.samples.back().state.config.t << '\n';
      return kExitParadox;
    case RunStatus::NonConvergence:
      err << "NonConvergence: " << traj.message << '\n';
      return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_impact(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto law = cfg.make_law();
  const auto& lp = law.params();
  const State& s = cfg.initial;
  try {
    const auto cls = classify(s, cfg.params, lp);
    json j = {{"classification", std::string(to_string(cls.tag))},
              {"n_S", cls.n_S},
              {"n_B", cls.n_B},
              {"law", std::string(to_string(law.family()))},
              {"sign_convention", std::string(to_string(lp.sign_convention))},
              {"p_L", state_json(s)},
              {"slip_L", friction_residual(s, cfg.params)}};
    if (!cls.is_impact()) {
      j["impact"] = false;
      j["sigma"] = 0.0;
      j["beta"] = 0.0;
      j["p_R"] = state_json(s);
      j["slip_R"] = friction_residual(s, cfg.params);
      j["impulse"] = {{"dx", 0.0}, {"dy", 0.0}, {"dtheta", 0.0}};
      j["energy_delta"] = 0.0;
    } else {
      const auto o = apply(law, s, cfg.params);
      j["impact"] = true;
      j["regime"] = std::string(to_string(o.regime));
      j["sigma"] = o.coefficients.sigma;
      j["beta"] = o.coefficients.beta;
      j["p_R"] = state_json(o.p_R);
      j["slip_R"] = friction_residual(o.p_R, cfg.params);
      j["impulse"] = {{"dx", o.impulse.dx}, {"dy", o.impulse.dy}, {"dtheta", o.impulse.dtheta}};
      j["energy_delta"] = o.energy_delta;
    }
    out << j.dump() << '\n';
  } catch (const NotOnContact& e) {
    err << "not on contact: " << e.what() << '\n';
    return kExitNotOnContact;
  } catch (const OutOfChart& e) {
    err << "not on contact: " << e.what() << '\n';
    return kExitNotOnContact;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

int cmd_paradox_map(const CommonOptions& opts, const ParadoxMapOptions& map, std::ostream& out,
                    std::ostream& err) {
  try {
    const RunConfig cfg = resolve_config(opts);
    std::mt19937_64 rng(opts.seed);
    const auto thetas = parse_values(map.theta, rng);
    const auto mus = parse_values(map.mu, rng);
    if (map.slip_sign != 1 && map.slip_sign != -1) {
      throw ConfigError("slip sign must be +1 or -1");
    }
    const auto cells =
        paradox_map(thetas, mus, cfg.params, map.slip_sign, map.thetadot, map.threads);
    auto f = open_output(opts, cfg.output.paradox_map);
    write_paradox_map_csv(f, cells);

    std::size_t counts[3] = {0, 0, 0};
    for (const auto& c : cells) ++counts[static_cast<int>(c.label)];
    const json j = {{"critical_mu", critical_mu(cfg.params, map.slip_sign)},
                    {"slip_sign", map.slip_sign},
                    {"cells", cells.size()},
                    {"Unique", counts[0]},
                    {"NoSolution", counts[1]},
                    {"Multiple", counts[2]}};
    out << j.dump() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts, const SweepOptions& sweep, std::ostream& out,
              std::ostream& err) {
  try {
    const RunConfig cfg = resolve_config(opts);
    if (sweep.axes.empty()) throw ConfigError("sweep needs at least one --axis");
    std::mt19937_64 rng(opts.seed);
    std::vector<Axis> axes;
    for (const auto& spec : sweep.axes) axes.push_back(parse_axis(spec, rng));
    const auto rows = run_sweep(cfg, axes, sweep.threads);
    auto f = open_output(opts, cfg.output.sweep);
    write_sweep_csv(f, axes, rows);
    out << json{{"cells", rows.size()}, {"output", (fs::path(opts.out_dir) / cfg.output.sweep).string()}}
               .dump()
        << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace painleve::cli
