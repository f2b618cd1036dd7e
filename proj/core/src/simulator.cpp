#include "painleve/simulator.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

using Vec6 = std::array<double, 6>;

// Touchdown fires slightly below the line so that a state released from
// contact is not immediately re-detected.
constexpr double kTouchdownSlack = 1e-12;

Vec6 pack(const State& s) {
  return {s.config.x, s.config.y, s.config.theta, s.vel.dx, s.vel.dy, s.vel.dtheta};
}

State unpack(const Vec6& v, double t) { return {{t, v[0], v[1], v[2]}, {v[3], v[4], v[5]}}; }

bool finite(const State& s) {
  for (double v : pack(s)) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double effective_mu(const Params& p, const SimulationSettings& st) {
  if (st.dynamics == DynamicsMode::Classical || st.smooth_coulomb) return p.mu_d;
  return 0.0;
}

bool frictional_sliding(const Params& p, const SimulationSettings& st) {
  return effective_mu(p, st) > 0.0;
}

double gap(const State& s, const Params& p) {
  return s.config.y - p.L * std::abs(std::sin(s.config.theta));
}

struct SlidingForces {
  double b = 0.0;
  double c = 0.0;
  double phi_x = 0.0;
  double phi_y = 0.0;
};

SlidingForces sliding_forces(const State& s, int slip_sign, const Params& p,
                             const SimulationSettings& st) {
  const double mu = effective_mu(p, st);
  const auto [b, c] = lcp_coefficients(s.config.theta, s.vel.dtheta, mu, slip_sign, p);
  const double phi_y = -c / b;
  return {b, c, -mu * slip_sign * phi_y, phi_y};
}

Acceleration accel_from_forces(double phi_x, double phi_y, double theta, const Params& p) {
  return {phi_x / p.m, -p.g + phi_y / p.m,
          -(p.L * std::cos(theta) * phi_y + p.L * std::sin(theta) * phi_x) / p.A};
}

Acceleration pinned_accel(const State& s, const Params& p) {
  const double c = std::cos(s.config.theta);
  const double sn = std::sin(s.config.theta);
  const double w = s.vel.dtheta;
  const double thdd = -p.m * p.g * p.L * c / (p.A + p.m * p.L * p.L);
  return {p.L * c * w * w + p.L * sn * thdd, p.L * c * thdd - p.L * sn * w * w, thdd};
}

State project(const Mode& mode, State s, const Params& p) {
  const double c = std::cos(s.config.theta);
  const double sn = std::sin(s.config.theta);
  switch (mode.kind) {
    case ModeKind::SlidingContact:
      s.config.y = p.L * sn;
      s.vel.dy = p.L * s.vel.dtheta * c;
      break;
    case ModeKind::Pinned:
      s.config.x = mode.pin_x - p.L * c;
      s.config.y = p.L * sn;
      s.vel.dx = p.L * s.vel.dtheta * sn;
      s.vel.dy = p.L * s.vel.dtheta * c;
      break;
    default: break;
  }
  return s;
}

// Wraps theta into (0, pi) by shifting a multiple of pi; a shift by an odd
// multiple swaps which endpoint is P.
State relabel(State s) {
  double th = std::fmod(s.config.theta, 2.0 * std::numbers::pi);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  if (th >= std::numbers::pi) th -= std::numbers::pi;
  s.config.theta = th;
  return s;
}

// n_B of a state tangent to S, where it reduces to a multiple of the slip.
double tangent_n_b(const State& s, const Params& p) {
  const double c = std::cos(s.config.theta);
  const double D = p.m * p.L * p.L * c * c + p.A;
  const double ip = p.m * p.L * p.L + p.A;
  return std::sqrt(p.m * D / ip) * friction_residual(s, p);
}

// Accelerations with NaN in place of a paradox, for use inside RK4 stages.
Acceleration rhs(const Mode& mode, const State& s, const Params& p, const SimulationSettings& st) {
  switch (mode.kind) {
    case ModeKind::FreeFlight: return {0.0, -p.g, 0.0};
    case ModeKind::SlidingContact: {
      const auto f = sliding_forces(s, mode.slip_sign, p, st);
      if (frictional_sliding(p, st) && f.b <= kDegenerateB) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
      }
      return accel_from_forces(f.phi_x, f.phi_y, s.config.theta, p);
    }
    case ModeKind::Pinned: return pinned_accel(s, p);
    case ModeKind::Terminated: break;
  }
  throw InvalidArgument("no smooth dynamics in a terminated mode");
}

Vec6 derivative(const Mode& mode, const Vec6& y, double t, const Params& p,
                const SimulationSettings& st) {
  const auto a = rhs(mode, unpack(y, t), p, st);
  return {y[3], y[4], y[5], a.xdd, a.ydd, a.thdd};
}

struct GuardHit {
  EventKind kind = EventKind::Touchdown;
  bool nonfinite = false;
};

std::optional<GuardHit> fired_guard(const Mode& mode, const State& s, const Params& p,
                                    const SimulationSettings& st) {
  const double tol = st.law.params().tol;
  if (!finite(s)) return GuardHit{EventKind::ParadoxEncountered, true};
  const double sn = std::sin(s.config.theta);
  switch (mode.kind) {
    case ModeKind::FreeFlight:
      if (gap(s, p) < -kTouchdownSlack) return GuardHit{EventKind::Touchdown};
      return std::nullopt;
    case ModeKind::SlidingContact: {
      const auto f = sliding_forces(s, mode.slip_sign, p, st);
      if (frictional_sliding(p, st) && (f.b <= kDegenerateB || !std::isfinite(f.phi_y))) {
        return GuardHit{EventKind::ParadoxEncountered};
      }
      if (sn <= tol) return GuardHit{EventKind::RodFlat};
      if (f.phi_y < 0.0) return GuardHit{EventKind::LiftOff};
      if (mode.slip_sign * friction_residual(s, p) <= 0.0) return GuardHit{EventKind::SlipStop};
      if (st.dynamics == DynamicsMode::Rgims && st.law.params().b_unilateral &&
          on_impacting_side(tangent_n_b(s, p), s.config.theta, st.law.params())) {
        return GuardHit{EventKind::BImpact};
      }
      return std::nullopt;
    }
    case ModeKind::Pinned: {
      if (sn <= tol) return GuardHit{EventKind::RodFlat};
      const auto f = pinned_forces(s, p);
      if (f.phi_y < 0.0) return GuardHit{EventKind::LiftOff};
      if (st.dynamics == DynamicsMode::Classical && !stick_check(f.phi_x, f.phi_y, p)) {
        return GuardHit{EventKind::SlipStart};
      }
      return std::nullopt;
    }
    case ModeKind::Terminated: return std::nullopt;
  }
  return std::nullopt;
}

struct Settled {
  Settled() = default;
  Settled(const State& s, const Mode& m) : state(s), mode(m) {}

  State state;
  Mode mode;
  VerticalVector impulse;
  bool impulsive = false;
  bool hit_s = false;
};

Settled sliding_candidate(const State& s, int slip_sign, const Params& p,
                          const SimulationSettings& st) {
  const auto f = sliding_forces(s, slip_sign, p, st);
  const auto r = resolve_contact(f.b, f.c);
  if (r.outcome != ContactOutcome::Unique) {
    return {s, Mode::terminated(TerminationReason::ParadoxEncountered)};
  }
  if (f.c > 0.0 || std::abs(f.b) <= kDegenerateB) return {s, Mode::free_flight()};
  return {s, Mode::sliding(slip_sign)};
}

int slip_sign_from_rest(const State& s, const PinnedForces& pin, const Params& p,
                        const SimulationSettings& st) {
  if (st.dynamics == DynamicsMode::Classical) return pin.phi_x > 0.0 ? -1 : 1;
  // Frictionless sliding: xdd = 0, slip' = -L sin(th) thdd - L thd^2 cos(th).
  const double th = s.config.theta;
  const auto [b, c] = lcp_coefficients(th, s.vel.dtheta, 0.0, 1, p);
  const double thdd = -p.L * std::cos(th) * (-c / b) / p.A;
  const double slip_rate =
      -p.L * std::sin(th) * thdd - p.L * s.vel.dtheta * s.vel.dtheta * std::cos(th);
  return slip_rate >= 0.0 ? 1 : -1;
}

Settled release(const State& s, const PinnedForces& pin, const Params& p,
                const SimulationSettings& st) {
  const double c_free = -p.g + p.L * s.vel.dtheta * s.vel.dtheta * std::sin(s.config.theta);
  if (c_free >= 0.0) return {s, Mode::free_flight()};
  return sliding_candidate(s, slip_sign_from_rest(s, pin, p, st), p, st);
}

Settled pinned_candidate(State s, const Params& p, const SimulationSettings& st) {
  s.vel = decompose(s, p, st.law.params().tol).par_B;
  const auto f = pinned_forces(s, p);
  if (f.phi_y < 0.0) return release(s, f, p, st);
  if (st.dynamics == DynamicsMode::Classical && !stick_check(f.phi_x, f.phi_y, p)) {
    return sliding_candidate(s, f.phi_x > 0.0 ? -1 : 1, p, st);
  }
  return {s, Mode::pinned(s.config.x + p.L * std::cos(s.config.theta))};
}

// Time until P returns to the line under free flight is 2 v_n / |c|.
bool short_flight(const State& s, const Params& p, const SimulationSettings& st) {
  const double th = s.config.theta;
  const double v_n = s.vel.dy - p.L * s.vel.dtheta * std::cos(th);
  const double c_n = -p.g + p.L * s.vel.dtheta * s.vel.dtheta * std::sin(th);
  return c_n < 0.0 && 2.0 * v_n < st.zeno_flight_time * -c_n;
}

// Brings a state with P on the line to a consistent post-event state and mode.
Settled settle_contact(State s, bool force_in_b, const Params& p, const SimulationSettings& st) {
  const auto& lp = st.law.params();
  const double sn = std::sin(s.config.theta);
  if (!in_contact_chart(s.config.theta) || sn <= lp.tol) {
    return {s, Mode::terminated(TerminationReason::RodFlat)};
  }
  s.config.y = p.L * sn;

  Settled out{s, Mode::free_flight()};
  auto d = decompose(s, p, lp.tol);
  std::optional<ImpactOutcome> impact;
  if (d.n_S < -lp.tol) {
    out.hit_s = true;
    impact = st.dynamics == DynamicsMode::Rgims ? apply(st.law, s, p)
                                                : apply_s_impact(s, p, lp.restitution, lp.tol);
  } else if (st.dynamics == DynamicsMode::Rgims &&
             classify(s, p, lp).tag == ImpactTag::TangentImpactB) {
    impact = apply(st.law, s, p);
  }
  if (impact) {
    s = impact->p_R;
    out.impulse = impact->impulse;
    out.impulsive = true;
    d = decompose(s, p, lp.tol);
    if (d.n_S > lp.tol && short_flight(s, p, st)) {
      State collapsed = s;
      collapsed.vel = decompose_S(s, p, lp.tol).par_S;
      out.impulse += collapsed.vel - s.vel;
      s = collapsed;
      if (st.dynamics == DynamicsMode::Rgims && classify(s, p, lp).is_impact()) {
        const auto second = apply(st.law, s, p);
        out.impulse += second.impulse;
        s = second.p_R;
        if (decompose(s, p, lp.tol).n_S > lp.tol && short_flight(s, p, st)) {
          collapsed.vel = decompose_S(s, p, lp.tol).par_S;
          out.impulse += collapsed.vel - s.vel;
          s.vel = collapsed.vel;
        }
      }
      d = decompose(s, p, lp.tol);
    }
  }

  Settled next;
  if (d.n_S > lp.tol) {
    next = {s, Mode::free_flight()};
  } else {
    s.vel = decompose_S(s, p, lp.tol).par_S;
    if (force_in_b || std::abs(d.n_B) <= lp.tol) {
      next = pinned_candidate(s, p, st);
    } else {
      next = sliding_candidate(s, d.n_B > 0.0 ? 1 : -1, p, st);
    }
  }
  out.state = next.state;
  out.mode = next.mode;
  return out;
}

Event terminal_event(const State& s, TerminationReason r) {
  Event e;
  e.time = s.config.t;
  e.kind = r == TerminationReason::RodFlat ? EventKind::RodFlat : EventKind::ParadoxEncountered;
  e.pre_state = s;
  e.post_state = s;
  e.mode_after = Mode::terminated(r);
  return e;
}

Transition finish(Event e, const Settled& r, const Params& p) {
  e.post_state = r.state;
  e.impulse = r.impulse;
  e.energy_delta = total_energy(r.state, p) - total_energy(e.pre_state, p);
  e.mode_after = r.mode;
  Transition out{r.state, r.mode, {e}};
  const bool already_terminal =
      e.kind == EventKind::ParadoxEncountered || e.kind == EventKind::RodFlat;
  if (r.mode.kind == ModeKind::Terminated && !already_terminal &&
      r.mode.reason != TerminationReason::NonConvergence) {
    out.events.push_back(terminal_event(r.state, r.mode.reason));
  }
  return out;
}

}  // namespace

std::string_view to_string(ModeKind k) {
  switch (k) {
    case ModeKind::FreeFlight: return "free_flight";
    case ModeKind::SlidingContact: return "sliding";
    case ModeKind::Pinned: return "pinned";
    case ModeKind::Terminated: return "terminated";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Touchdown: return "Touchdown";
    case EventKind::SlipStop: return "SlipStop";
    case EventKind::SlipStart: return "SlipStart";
    case EventKind::LiftOff: return "LiftOff";
    case EventKind::BImpact: return "BImpact";
    case EventKind::ParadoxEncountered: return "ParadoxEncountered";
    case EventKind::RodFlat: return "RodFlat";
  }
  return "?";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::RodFlat: return "rod_flat";
    case RunStatus::ParadoxEncountered: return "paradox";
    case RunStatus::NonConvergence: return "non_convergence";
  }
  return "?";
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::None: return "none";
    case TerminationReason::RodFlat: return "rod_flat";
    case TerminationReason::ParadoxEncountered: return "paradox";
    case TerminationReason::NonConvergence: return "non_convergence";
  }
  return "?";
}

std::string mode_label(const Mode& m) {
  if (m.kind == ModeKind::SlidingContact) return m.slip_sign > 0 ? "sliding+" : "sliding-";
  return std::string(to_string(m.kind));
}

void SimulationSettings::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(dt)) throw InvalidArgument("dt must be positive");
  if (!positive(dt_out)) throw InvalidArgument("dt_out must be positive");
  if (!std::isfinite(t_max)) throw InvalidArgument("t_max must be finite");
  if (!positive(event_time_tol)) throw InvalidArgument("event_time_tol must be positive");
  if (!std::isfinite(min_event_spacing) || min_event_spacing < 0.0) {
    throw InvalidArgument("min_event_spacing must be >= 0");
  }
  if (max_events == 0) throw InvalidArgument("max_events must be positive");
  if (!std::isfinite(zeno_flight_time) || zeno_flight_time < 0.0) {
    throw InvalidArgument("zeno_flight_time must be >= 0");
  }
}

double total_energy(const State& s, const Params& p) {
  return kinetic_energy(s, p) + p.m * p.g * s.config.y;
}

PinnedForces pinned_forces(const State& s, const Params& p) {
  const auto a = pinned_accel(s, p);
  return {p.m * a.xdd, p.m * (a.ydd + p.g)};
}

Acceleration smooth_rhs(const Mode& mode, const State& s, const Params& p,
                        const SimulationSettings& settings) {
  if (mode.kind == ModeKind::SlidingContact && frictional_sliding(p, settings)) {
    const auto f = sliding_forces(s, mode.slip_sign, p, settings);
    if (resolve_contact(f.b, f.c).outcome != ContactOutcome::Unique || f.b <= kDegenerateB) {
      std::ostringstream msg;
      msg << "no unique contact force at theta=" << s.config.theta << " (b=" << f.b
          << ", c=" << f.c << ")";
      throw ParadoxError(msg.str());
    }
  }
  return rhs(mode, s, p, settings);
}

State integrate_step(const Mode& mode, const State& s, double h, const Params& p,
                     const SimulationSettings& settings) {
  const double t = s.config.t;
  const Vec6 y = pack(s);
  auto axpy = [](const Vec6& a, double k, const Vec6& b) {
    Vec6 r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + k * b[i];
    return r;
  };
  const Vec6 k1 = derivative(mode, y, t, p, settings);
  const Vec6 k2 = derivative(mode, axpy(y, 0.5 * h, k1), t + 0.5 * h, p, settings);
  const Vec6 k3 = derivative(mode, axpy(y, 0.5 * h, k2), t + 0.5 * h, p, settings);
  const Vec6 k4 = derivative(mode, axpy(y, h, k3), t + h, p, settings);
  Vec6 out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return project(mode, unpack(out, t + h), p);
}

std::optional<Event> detect_event(const Mode& mode, const State& start, double h,
                                  const Params& p, const SimulationSettings& settings) {
  if (mode.kind == ModeKind::Terminated) return std::nullopt;
  State at_hi = integrate_step(mode, start, h, p, settings);
  auto hit = fired_guard(mode, at_hi, p, settings);
  if (!hit) return std::nullopt;

  double lo = 0.0;
  double hi = h;
  while (hi - lo > settings.event_time_tol) {
    const double mid = 0.5 * (lo + hi);
    const State s = integrate_step(mode, start, mid, p, settings);
    if (auto m = fired_guard(mode, s, p, settings)) {
      hi = mid;
      at_hi = s;
      hit = m;
    } else {
      lo = mid;
    }
  }

  if (hit->nonfinite) {
    if (!(mode.kind == ModeKind::SlidingContact && frictional_sliding(p, settings))) {
      std::ostringstream msg;
      msg << "integration produced a non-finite state near t=" << start.config.t + hi;
      throw Error(msg.str());
    }
    at_hi = lo > 0.0 ? integrate_step(mode, start, lo, p, settings) : start;
  }

  Event e;
  e.time = at_hi.config.t;
  e.kind = hit->kind;
  e.pre_state = at_hi;
  e.post_state = at_hi;
  e.mode_after = mode;
  return e;
}

Transition transition(const Event& e, const Mode& before, const Params& p,
                      const SimulationSettings& settings) {
  const State& s = e.pre_state;
  switch (e.kind) {
    case EventKind::Touchdown: return finish(e, settle_contact(relabel(s), false, p, settings), p);
    case EventKind::SlipStop: return finish(e, settle_contact(s, true, p, settings), p);
    case EventKind::BImpact: return finish(e, settle_contact(s, false, p, settings), p);
    case EventKind::SlipStart: {
      const auto f = pinned_forces(s, p);
      return finish(e, sliding_candidate(s, f.phi_x > 0.0 ? -1 : 1, p, settings), p);
    }
    case EventKind::LiftOff:
      if (before.kind == ModeKind::Pinned) {
        return finish(e, release(s, pinned_forces(s, p), p, settings), p);
      }
      return finish(e, {s, Mode::free_flight()}, p);
    case EventKind::ParadoxEncountered:
      return finish(e, {s, Mode::terminated(TerminationReason::ParadoxEncountered)}, p);
    case EventKind::RodFlat:
      return finish(e, {s, Mode::terminated(TerminationReason::RodFlat)}, p);
  }
  throw InvalidArgument("unknown event kind");
}

Transition initial_transition(const State& s, const Params& p, const SimulationSettings& settings) {
  if (!finite(s)) throw InvalidArgument("initial state must be finite");
  const double tol = settings.law.params().tol;
  const double g = gap(s, p);
  if (g > tol) return {s, Mode::free_flight(), {}};
  if (g < -tol) throw InvalidArgument("initial state has the rod below the line");

  const auto r = settle_contact(relabel(s), false, p, settings);
  if (!r.impulsive) {
    Transition out{r.state, r.mode, {}};
    if (r.mode.kind == ModeKind::Terminated) {
      out.events.push_back(terminal_event(r.state, r.mode.reason));
    }
    return out;
  }
  Event e;
  e.time = s.config.t;
  e.kind = r.hit_s ? EventKind::Touchdown : EventKind::BImpact;
  e.pre_state = s;
  return finish(e, r, p);
}

Trajectory run(const State& initial, const Params& p, const SimulationSettings& settings) {
  p.validate();
  settings.validate();
  if (!(settings.t_max > initial.config.t)) {
    throw InvalidArgument("t_max must exceed the initial time");
  }

  Trajectory traj;
  traj.params = p;
  traj.settings = settings;
  auto add_sample = [&](const State& s, const Mode& m) {
    if (!traj.samples.empty() && traj.samples.back().state.config.t >= s.config.t) {
      traj.samples.back() = {s, m};
    } else {
      traj.samples.push_back({s, m});
    }
  };
  auto append = [&](const std::vector<Event>& events) {
    traj.events.insert(traj.events.end(), events.begin(), events.end());
  };
  auto stop = [&](State s, std::string message) {
    traj.message = std::move(message);
    add_sample(s, Mode::terminated(TerminationReason::NonConvergence));
    return Mode::terminated(TerminationReason::NonConvergence);
  };

  auto init = initial_transition(initial, p, settings);
  State s = init.state;
  Mode mode = init.mode;
  append(init.events);
  add_sample(s, mode);

  const double t0 = initial.config.t;
  std::size_t k = 1;
  double last_event = -std::numeric_limits<double>::infinity();
  while (mode.kind != ModeKind::Terminated && s.config.t < settings.t_max) {
    const double t = s.config.t;
    double t_out = t0 + static_cast<double>(k) * settings.dt_out;
    while (t_out <= t) t_out = t0 + static_cast<double>(++k) * settings.dt_out;
    const double t_next = std::min({t + settings.dt, t_out, settings.t_max});

    std::optional<Event> ev;
    try {
      ev = detect_event(mode, s, t_next - t, p, settings);
    } catch (const Error& err) {
      mode = stop(s, err.what());
      break;
    }
    if (!ev) {
      s = integrate_step(mode, s, t_next - t, p, settings);
      s.config.t = t_next;
      if (t_next == t_out) {
        add_sample(s, mode);
        ++k;
      } else if (t_next == settings.t_max) {
        add_sample(s, mode);
      }
      continue;
    }

    const bool terminal =
        ev->kind == EventKind::RodFlat || ev->kind == EventKind::ParadoxEncountered;
    if ((!terminal && ev->time - last_event < settings.min_event_spacing) ||
        traj.events.size() >= settings.max_events) {
      std::ostringstream msg;
      msg << "event accumulation at t=" << ev->time << " (" << to_string(ev->kind) << ")";
      mode = stop(ev->pre_state, msg.str());
      break;
    }
    last_event = ev->time;
    try {
      auto tr = transition(*ev, mode, p, settings);
      s = tr.state;
      mode = tr.mode;
      append(tr.events);
      add_sample(s, mode);
    } catch (const Error& err) {
      mode = stop(ev->pre_state, err.what());
      break;
    }
  }

  switch (mode.reason) {
    case TerminationReason::None: traj.status = RunStatus::Completed; break;
    case TerminationReason::RodFlat: traj.status = RunStatus::RodFlat; break;
    case TerminationReason::ParadoxEncountered: traj.status = RunStatus::ParadoxEncountered; break;
    case TerminationReason::NonConvergence: traj.status = RunStatus::NonConvergence; break;
  }
  return traj;
}

}  // namespace painleve
