#pragma once

// Configuration space, mass metric and constraint bundles of a rigid rod
// whose endpoint P slides on a rough horizontal line.
//
// Coordinates are (t, x, y, theta): (x, y) is the centre of mass G and the
// endpoint is P = G + L (cos(theta), -sin(theta)). The contact bundle S is
// y - L sin(theta) = 0 and the friction bundle B is the set of velocities
// tangent to S with zero slip, xdot - L thetadot sin(theta) = 0.

#include <cmath>

namespace painleve {

/// Absolute tolerance used by contact and tangency predicates (SI units).
inline constexpr double kDefaultTolerance = 1e-9;

/// Mass, geometry, gravity and friction data of the rod.
struct Params {
  double m = 1.0;         ///< mass [kg]
  double L = 1.0;         ///< half-length [m]
  double A = 1.0 / 3.0;   ///< moment of inertia about G [kg m^2]
  double g = 9.81;        ///< gravity magnitude [m/s^2]
  double mu_s = 0.0;      ///< static friction coefficient (classical model only)
  double mu_d = 0.0;      ///< dynamic friction coefficient (classical model only)

  /// Throws InvalidArgument unless m, L, A > 0, g >= 0 and mu_s >= mu_d >= 0.
  void validate() const;

  /// Homogeneous rod: A = m L^2 / 3.
  static Params uniform_rod(double m, double L, double g = 9.81);

  friend bool operator==(const Params&, const Params&) = default;
};

struct Config {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Element of the vertical bundle V(M): components along d/dx, d/dy, d/dtheta.
/// Velocities and impulses share this representation.
struct VerticalVector {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;

  VerticalVector& operator+=(const VerticalVector& o) {
    dx += o.dx;
    dy += o.dy;
    dtheta += o.dtheta;
    return *this;
  }
  VerticalVector& operator-=(const VerticalVector& o) {
    dx -= o.dx;
    dy -= o.dy;
    dtheta -= o.dtheta;
    return *this;
  }
  VerticalVector& operator*=(double s) {
    dx *= s;
    dy *= s;
    dtheta *= s;
    return *this;
  }

  friend VerticalVector operator+(VerticalVector a, const VerticalVector& b) { return a += b; }
  friend VerticalVector operator-(VerticalVector a, const VerticalVector& b) { return a -= b; }
  friend VerticalVector operator*(double s, VerticalVector v) { return v *= s; }
  friend VerticalVector operator*(VerticalVector v, double s) { return v *= s; }
  friend VerticalVector operator-(const VerticalVector& v) { return {-v.dx, -v.dy, -v.dtheta}; }
  friend bool operator==(const VerticalVector&, const VerticalVector&) = default;
};

/// Point of the affine bundle J of absolute velocities. The d/dt component is
/// identically 1 and is not stored.
struct State {
  Config config;
  VerticalVector vel;

  friend bool operator==(const State&, const State&) = default;
};

/// Three-way split p = par_B + perp_B + perp_S induced by the mass metric.
struct Decomposition {
  VerticalVector par_B;   ///< component in V(B)
  VerticalVector perp_B;  ///< component in the complement of V(B) inside V(S)
  VerticalVector perp_S;  ///< component in the complement of V(S)
  double n_S = 0.0;       ///< Phi(perp_S, K_S)
  double n_B = 0.0;       ///< Phi(perp_B, K_B)
};

/// Two-way split p = par_S + perp_S.
struct SDecomposition {
  VerticalVector par_S;
  VerticalVector perp_S;
};

struct ContactPointVelocity {
  double vx = 0.0;
  double vy = 0.0;
};

/// Mass metric diag(m, m, A).
double inner(const Params& p, const VerticalVector& u, const VerticalVector& v);

/// sqrt(inner(v, v)).
double metric_norm(const Params& p, const VerticalVector& v);

/// y - L sin(theta); zero iff P touches the line.
double contact_residual(const Config& c, const Params& p);

/// Slip of the contact point, xdot - L thetadot sin(theta).
double friction_residual(const State& s, const Params& p);

ContactPointVelocity contact_point_velocity(const State& s, const Params& p);

/// (v_P . e_x) cos(theta): positive when the rod is pushed, negative when
/// pulled. Throws NotTangent if |v_P . e_y| > tol.
double push_pull_indicator(const State& s, const Params& p, double tol = kDefaultTolerance);

bool in_contact_chart(double theta);
bool on_contact(const Config& c, const Params& p, double tol = kDefaultTolerance);
bool tangent_to_contact(const State& s, const Params& p, double tol = kDefaultTolerance);

/// Unit generator of the metric complement of V(S).
VerticalVector k_S(double theta, const Params& p);

/// Unit generator of the metric complement of V(B) inside V(S).
VerticalVector k_B(double theta, const Params& p);

/// Throws OutOfChart if theta is outside (0, pi) and NotOnContact if the
/// configuration is off the line by more than tol.
Decomposition decompose(const State& s, const Params& p, double tol = kDefaultTolerance);
SDecomposition decompose_S(const State& s, const Params& p, double tol = kDefaultTolerance);

/// Contact state with the given angle, angular velocity and slip, tangent
/// to S: y = L sin(theta), ydot = L thetadot cos(theta).
State tangent_contact_state(double theta, double thetadot, double slip, const Params& p,
                            double x = 0.0, double t = 0.0);

}  // namespace painleve
