#include "painleve/cli/output.hpp"

#include <array>
#include <charconv>
#include <nlohmann/json.hpp>

namespace painleve::cli {

namespace {

using nlohmann::json;

json velocity_json(const VerticalVector& v) {
  return {{"xdot", v.dx}, {"ydot", v.dy}, {"thetadot", v.dtheta}};
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& [s, mode] : traj.samples) {
    const auto& c = s.config;
    const auto& v = s.vel;
    for (double x : {c.t, c.x, c.y, c.theta, v.dx, v.dy, v.dtheta}) out << format_double(x) << ',';
    out << mode_label(mode) << '\n';
  }
}

void write_events_jsonl(std::ostream& out, const Trajectory& traj) {
  for (const auto& e : traj.events) {
    const json j = {
        {"time", e.time},
        {"kind", std::string(to_string(e.kind))},
        {"pre", velocity_json(e.pre_state.vel)},
        {"post", velocity_json(e.post_state.vel)},
        {"impulse", {{"dx", e.impulse.dx}, {"dy", e.impulse.dy}, {"dtheta", e.impulse.dtheta}}},
        {"energy_delta", e.energy_delta},
        {"mode_after", mode_label(e.mode_after)},
    };
    out << j.dump() << '\n';
  }
}

void write_paradox_map_csv(std::ostream& out, std::span<const ParadoxCell> cells) {
  out << kParadoxMapHeader << '\n';
  for (const auto& cell : cells) {
    out << format_double(cell.theta) << ',' << format_double(cell.mu) << ','
        << to_string(cell.label) << ',' << format_double(cell.b) << ',' << format_double(cell.c)
        << '\n';
  }
}

RunSummary summarize(const Trajectory& traj) {
  RunSummary s;
  s.status = std::string(to_string(traj.status));
  s.events = traj.events.size();
  if (!traj.samples.empty()) {
    const auto& first = traj.samples.front().state;
    const auto& [last, mode] = traj.samples.back();
    s.final_mode = mode_label(mode);
    s.t_final = last.config.t;
    s.energy_loss = total_energy(first, traj.params) - total_energy(last, traj.params);
    // The first sample is already post-impact when the run starts with an
    // impulse; count that impulse too.
    for (const auto& e : traj.events) {
      if (e.time <= first.config.t) s.energy_loss -= e.energy_delta;
    }
  }
  for (const auto& e : traj.events) {
    s.detached = s.detached || e.mode_after.kind == ModeKind::FreeFlight;
  }
  return s;
}

std::string summary_json(const RunSummary& s) {
  const json j = {{"final_mode", s.final_mode}, {"status", s.status},
                  {"t_final", s.t_final},       {"energy_loss", s.energy_loss},
                  {"detached", s.detached},     {"events", s.events}};
  return j.dump();
}

}  // namespace painleve::cli
