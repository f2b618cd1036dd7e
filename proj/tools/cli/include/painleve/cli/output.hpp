#pragma once

// Text formats written by the command-line tool. Numbers use the shortest
// representation that round-trips (std::to_chars), independent of locale.

#include <ostream>
#include <span>
#include <string>

#include "painleve/classical.hpp"
#include "painleve/simulator.hpp"

namespace painleve::cli {

inline constexpr const char* kTrajectoryHeader = "t,x,y,theta,xdot,ydot,thetadot,mode";
inline constexpr const char* kParadoxMapHeader = "theta,mu,label,b,c";

std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// One JSON object per line: time, kind, pre/post velocities, impulse,
/// energy_delta and the mode entered.
void write_events_jsonl(std::ostream& out, const Trajectory& traj);

void write_paradox_map_csv(std::ostream& out, std::span<const ParadoxCell> cells);

/// Condensed outcome of a run, shared by `simulate` and `sweep`.
struct RunSummary {
  std::string final_mode;
  std::string status;
  double t_final = 0.0;
  double energy_loss = 0.0;  ///< initial minus final total energy [J]
  bool detached = false;     ///< some event entered free flight
  std::size_t events = 0;
};

RunSummary summarize(const Trajectory& traj);
std::string summary_json(const RunSummary& s);

}  // namespace painleve::cli
