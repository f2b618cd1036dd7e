#include "painleve/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

void require_on_chart(const State& s, const Params& p, double tol) {
  if (!in_contact_chart(s.config.theta)) {
    std::ostringstream msg;
    msg << "theta = " << s.config.theta << " is outside the contact chart (0, pi)";
    throw OutOfChart(msg.str());
  }
  const double r = contact_residual(s.config, p);
  if (!(std::abs(r) <= tol)) {
    std::ostringstream msg;
    msg << "configuration is not on the contact bundle (residual " << r << ")";
    throw NotOnContact(msg.str());
  }
}

// m L^2 cos^2(theta) + A, the recurring denominator; bounded below by A.
double reduced_inertia(double cos_theta, const Params& p) {
  return p.m * p.L * p.L * cos_theta * cos_theta + p.A;
}

}  // namespace

void Params::validate() const {
  require(std::isfinite(m) && m > 0.0, "mass m must be positive");
  require(std::isfinite(L) && L > 0.0, "half-length L must be positive");
  require(std::isfinite(A) && A > 0.0, "moment of inertia A must be positive");
  require(std::isfinite(g) && g >= 0.0, "gravity g must be non-negative");
  require(std::isfinite(mu_d) && mu_d >= 0.0, "mu_d must be non-negative");
  require(std::isfinite(mu_s) && mu_s >= mu_d, "mu_s must be at least mu_d");
}

Params Params::uniform_rod(double m, double L, double g) {
  Params p;
  p.m = m;
  p.L = L;
  p.A = m * L * L / 3.0;
  p.g = g;
  return p;
}

double inner(const Params& p, const VerticalVector& u, const VerticalVector& v) {
  return p.m * u.dx * v.dx + p.m * u.dy * v.dy + p.A * u.dtheta * v.dtheta;
}

double metric_norm(const Params& p, const VerticalVector& v) { return std::sqrt(inner(p, v, v)); }

double contact_residual(const Config& c, const Params& p) { return c.y - p.L * std::sin(c.theta); }

double friction_residual(const State& s, const Params& p) {
  return s.vel.dx - p.L * s.vel.dtheta * std::sin(s.config.theta);
}

ContactPointVelocity contact_point_velocity(const State& s, const Params& p) {
  const double th = s.config.theta;
  return {s.vel.dx - p.L * s.vel.dtheta * std::sin(th), s.vel.dy - p.L * s.vel.dtheta * std::cos(th)};
}

double push_pull_indicator(const State& s, const Params& p, double tol) {
  const auto v = contact_point_velocity(s, p);
  if (!(std::abs(v.vy) <= tol)) {
    std::ostringstream msg;
    msg << "contact-point velocity has normal component " << v.vy;
    throw NotTangent(msg.str());
  }
  return v.vx * std::cos(s.config.theta);
}

bool in_contact_chart(double theta) { return theta > 0.0 && theta < std::numbers::pi; }

bool on_contact(const Config& c, const Params& p, double tol) {
  return std::abs(contact_residual(c, p)) <= tol;
}

bool tangent_to_contact(const State& s, const Params& p, double tol) {
  return std::abs(contact_point_velocity(s, p).vy) <= tol;
}

VerticalVector k_S(double theta, const Params& p) {
  const double c = std::cos(theta);
  const double d = reduced_inertia(c, p);
  const double scale = std::sqrt(d / (p.m * p.A));
  return {0.0, scale * p.A / d, -scale * p.m * p.L * c / d};
}

VerticalVector k_B(double theta, const Params& p) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double d = reduced_inertia(c, p);
  const double pivot = p.m * p.L * p.L + p.A;  // inertia about P
  const double scale = std::sqrt(pivot / (p.m * d));
  return {scale * d / pivot, -scale * p.m * p.L * p.L * s * c / pivot, -scale * p.m * p.L * s / pivot};
}

Decomposition decompose(const State& st, const Params& p, double tol) {
  require_on_chart(st, p, tol);
  const double th = st.config.theta;
  const double c = std::cos(th);
  const double s = std::sin(th);
  const auto& v = st.vel;
  const double d = reduced_inertia(c, p);
  const double pivot = p.m * p.L * p.L + p.A;

  Decomposition out;
  out.n_S = std::sqrt(p.m * p.A / d) * (v.dy - p.L * v.dtheta * c);
  out.n_B = std::sqrt(p.m * d / pivot) *
            (v.dx - p.L * s * (p.m * p.L * v.dy * c + p.A * v.dtheta) / d);
  out.perp_S = out.n_S * k_S(th, p);
  out.perp_B = out.n_B * k_B(th, p);

  // Angular velocity of the B-component: rotation about the resting contact point.
  const double w = (p.m * p.L * v.dx * s + p.m * p.L * v.dy * c + p.A * v.dtheta) / pivot;
  out.par_B = {p.L * w * s, p.L * w * c, w};
  return out;
}

SDecomposition decompose_S(const State& st, const Params& p, double tol) {
  require_on_chart(st, p, tol);
  const double th = st.config.theta;
  const double c = std::cos(th);
  const auto& v = st.vel;
  const double d = reduced_inertia(c, p);
  const double mlc = p.m * p.L * c;

  SDecomposition out;
  out.par_S = {v.dx, (mlc * p.L * c * v.dy + p.A * p.L * c * v.dtheta) / d,
               (mlc * v.dy + p.A * v.dtheta) / d};
  const double n_S = std::sqrt(p.m * p.A / d) * (v.dy - p.L * v.dtheta * c);
  out.perp_S = n_S * k_S(th, p);
  return out;
}

State tangent_contact_state(double theta, double thetadot, double slip, const Params& p, double x,
                            double t) {
  State s;
  s.config = {t, x, p.L * std::sin(theta), theta};
  s.vel = {slip + p.L * thetadot * std::sin(theta), p.L * thetadot * std::cos(theta), thetadot};
  return s;
}

}  // namespace painleve
