#pragma once

// Event-driven hybrid evolution of the rod.
//
// Smooth phases (free flight, sliding contact, pinned rotation about P) are
// integrated with fixed-step RK4. Guard functions are checked at the end of
// each step; a firing guard is localised by bisection on the step length and
// the state is handed to `transition`, which applies impulses and chooses the
// next mode.
//
// Two dynamics are available:
//   - Rgims: friction acts only through the impulsive kinetic constraint B.
//     Smooth sliding carries no tangential force (unless smooth_coulomb is
//     set) and a pin persists until lift-off.
//   - Classical: sliding carries the Coulomb force; the normal reaction comes
//     from the complementarity problem, and a non-unique or infeasible
//     problem terminates the run with ParadoxEncountered.
//
// Endpoint relabelling: the contact chart is theta in (0, pi), where P is the
// lower endpoint. At touchdown theta is shifted by a multiple of pi so that the
// endpoint that touched is P; trajectories show the jump.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/classical.hpp"
#include "painleve/geometry.hpp"
#include "painleve/impact.hpp"

namespace painleve {

enum class DynamicsMode { Rgims, Classical };

enum class ModeKind { FreeFlight, SlidingContact, Pinned, Terminated };

enum class TerminationReason { None, RodFlat, ParadoxEncountered, NonConvergence };

struct Mode {
  ModeKind kind = ModeKind::FreeFlight;
  int slip_sign = 0;    ///< SlidingContact only
  double pin_x = 0.0;   ///< Pinned only: abscissa of the resting contact point
  TerminationReason reason = TerminationReason::None;

  static Mode free_flight() { return {}; }
  static Mode sliding(int slip_sign) { return {ModeKind::SlidingContact, slip_sign, 0.0, {}}; }
  static Mode pinned(double pin_x) { return {ModeKind::Pinned, 0, pin_x, {}}; }
  static Mode terminated(TerminationReason r) { return {ModeKind::Terminated, 0, 0.0, r}; }

  friend bool operator==(const Mode&, const Mode&) = default;
};

enum class EventKind { Touchdown, SlipStop, SlipStart, LiftOff, BImpact, ParadoxEncountered, RodFlat };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Touchdown;
  State pre_state;
  State post_state;
  VerticalVector impulse;     ///< zero for non-impulsive events
  double energy_delta = 0.0;  ///< total mechanical energy, post minus pre [J]
  Mode mode_after;
};

struct Acceleration {
  double xdd = 0.0;
  double ydd = 0.0;
  double thdd = 0.0;
};

/// Contact reaction needed to hold P at rest.
struct PinnedForces {
  double phi_x = 0.0;
  double phi_y = 0.0;
};

struct SimulationSettings {
  DynamicsMode dynamics = DynamicsMode::Rgims;
  ConstitutiveLaw law{LawFamily::Stop, LawParams{}};
  bool smooth_coulomb = false;  ///< Rgims only: Coulomb force in smooth sliding
  double dt = 1e-4;
  double dt_out = 1e-2;
  double t_max = 1.0;
  double event_time_tol = 1e-10;
  double min_event_spacing = 1e-9;  ///< closer events end the run with NonConvergence
  std::size_t max_events = 100000;
  /// A rebound off the line whose ballistic flight would last less than this
  /// is collapsed to contact, ending inelastic bounce sequences (0 disables).
  double zeno_flight_time = 1e-5;

  /// Contact and tangency predicates use law.params().tol.
  /// Throws InvalidArgument on non-positive step sizes or tolerances.
  void validate() const;
};

struct Sample {
  State state;
  Mode mode;
};

enum class RunStatus { Completed, RodFlat, ParadoxEncountered, NonConvergence };

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;
  Params params;
  SimulationSettings settings;
  RunStatus status = RunStatus::Completed;
  std::string message;
};

/// Result of an impulsive or mode-switching transition. `events` holds the
/// triggering event with its post-state filled in, followed by a
/// ParadoxEncountered or RodFlat event when the new mode is terminal.
struct Transition {
  State state;
  Mode mode;
  std::vector<Event> events;
};

std::string_view to_string(ModeKind k);
std::string_view to_string(EventKind k);
std::string_view to_string(RunStatus s);
std::string_view to_string(TerminationReason r);
/// "free_flight", "sliding+", "sliding-", "pinned" or "terminated".
std::string mode_label(const Mode& m);

/// Kinetic plus gravitational potential energy.
double total_energy(const State& s, const Params& p);

PinnedForces pinned_forces(const State& s, const Params& p);

/// Accelerations of the smooth phase. Throws ParadoxError when a frictional
/// sliding state has no unique contact force.
Acceleration smooth_rhs(const Mode& mode, const State& s, const Params& p,
                        const SimulationSettings& settings);

/// One RK4 step of length h in the given mode, followed by projection onto
/// the mode's constraint manifold.
State integrate_step(const Mode& mode, const State& s, double h, const Params& p,
                     const SimulationSettings& settings);

/// Integrates one step of length h and returns the earliest guard crossing,
/// localised to settings.event_time_tol. pre_state and post_state both hold
/// the state just past the crossing. Throws Error if the step produces a
/// non-finite state outside frictional sliding.
std::optional<Event> detect_event(const Mode& mode, const State& start, double h,
                                  const Params& p, const SimulationSettings& settings);

/// Applies the event: impulses, endpoint relabelling and the choice of the
/// next smooth mode.
Transition transition(const Event& e, const Mode& before, const Params& p,
                      const SimulationSettings& settings);

/// Mode of an initial state; applies an impulse (recorded as an event at t0)
/// when the state impacts S or B.
Transition initial_transition(const State& s, const Params& p, const SimulationSettings& settings);

Trajectory run(const State& initial, const Params& p, const SimulationSettings& settings);

}  // namespace painleve
