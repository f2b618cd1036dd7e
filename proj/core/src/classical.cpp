#include "painleve/classical.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "painleve/errors.hpp"
#include "painleve/parallel.hpp"

namespace painleve {

namespace {

void require_slip_sign(int s) {
  if (s != 1 && s != -1) throw InvalidArgument("slip sign must be +1 or -1");
}

// Friction coefficient above which b(theta) < 0, on the half of (0, pi) where
// s cos(theta) > 0. Parametrised by u in (0, pi/2); the other half mirrors it.
double threshold_mu(double u, const Params& p) {
  const double c = std::cos(u);
  const double s = std::sin(u);
  return (p.A / p.m + p.L * p.L * c * c) / (p.L * p.L * c * s);
}

}  // namespace

std::string_view to_string(ContactOutcome o) {
  switch (o) {
    case ContactOutcome::Unique: return "Unique";
    case ContactOutcome::NoSolution: return "NoSolution";
    case ContactOutcome::Multiple: return "Multiple";
  }
  return "?";
}

double coulomb_tangential(double phi_y, double slip, const Params& p) {
  if (slip == 0.0) throw ZeroSlip("dynamic friction needs non-zero slip; use stick_check");
  return -p.mu_d * std::abs(phi_y) * (slip > 0.0 ? 1.0 : -1.0);
}

bool stick_check(double fx, double fy, const Params& p) {
  return std::abs(fx) <= p.mu_s * std::abs(fy);
}

LcpCoefficients lcp_coefficients(double theta, double thetadot, double mu, int slip_sign,
                                 const Params& p) {
  require_slip_sign(slip_sign);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {1.0 / p.m + (p.L * p.L / p.A) * c * (c - mu * slip_sign * s),
          -p.g + p.L * thetadot * thetadot * s};
}

LcpCoefficients normal_lcp_coefficients(const State& st, const Params& p, int slip_sign,
                                        double tol) {
  if (!on_contact(st.config, p, tol) || !in_contact_chart(st.config.theta)) {
    throw NotOnContact("normal_lcp_coefficients needs a state on the contact bundle");
  }
  if (!tangent_to_contact(st, p, tol)) {
    throw NotTangent("normal_lcp_coefficients needs a velocity tangent to the line");
  }
  return lcp_coefficients(st.config.theta, st.vel.dtheta, p.mu_d, slip_sign, p);
}

ContactResolution resolve_contact(double b, double c) {
  ContactResolution r{b, c, ContactOutcome::Unique, {}};
  if (std::abs(b) <= kDegenerateB) {
    // ypp_P = c regardless of phi_y.
    if (c >= 0.0) {
      r.candidates.push_back({0.0, c});
    } else {
      r.outcome = ContactOutcome::NoSolution;
    }
    return r;
  }
  if (b > 0.0) {
    const double phi = std::max(0.0, -c / b);
    r.candidates.push_back({phi, phi > 0.0 ? 0.0 : c});
    return r;
  }
  // b < 0: the contact branch has phi = -c/b >= 0 iff c >= 0, the detached
  // branch needs c >= 0 as well.
  if (c < 0.0) {
    r.outcome = ContactOutcome::NoSolution;
  } else if (c > 0.0) {
    r.outcome = ContactOutcome::Multiple;
    r.candidates.push_back({0.0, c});
    r.candidates.push_back({-c / b, 0.0});
  } else {
    r.outcome = ContactOutcome::Multiple;
    r.candidates.push_back({0.0, 0.0});
  }
  return r;
}

double critical_mu(const Params& p, int slip_sign) {
  require_slip_sign(slip_sign);
  p.validate();

  constexpr int kGrid = 2048;
  constexpr double kHalf = std::numbers::pi / 2.0;
  int best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGrid; ++i) {
    const double v = threshold_mu(kHalf * i / kGrid, p);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = kHalf * (best - 1) / kGrid;
  const double hi = kHalf * (best + 1) / kGrid;
  const auto [u, value] = boost::math::tools::brent_find_minima(
      [&](double x) {
        return x <= 0.0 || x >= kHalf ? std::numeric_limits<double>::infinity()
                                      : threshold_mu(x, p);
      },
      lo, hi, std::numeric_limits<double>::digits / 2);
  (void)u;
  return std::min(value, best_value);
}

std::vector<ParadoxCell> paradox_map(std::span<const double> thetas, std::span<const double> mus,
                                     const Params& p, int slip_sign, double thetadot,
                                     unsigned threads) {
  require_slip_sign(slip_sign);
  p.validate();
  if (thetas.empty() || mus.empty()) throw InvalidGrid("paradox map grids must be non-empty");
  for (double th : thetas) {
    if (!std::isfinite(th) || !in_contact_chart(th)) {
      std::ostringstream msg;
      msg << "theta grid value " << th << " is outside (0, pi)";
      throw InvalidGrid(msg.str());
    }
  }
  for (double mu : mus) {
    if (!std::isfinite(mu) || mu < 0.0) throw InvalidGrid("mu grid values must be >= 0");
  }
  if (!std::isfinite(thetadot)) throw InvalidArgument("thetadot must be finite");

  std::vector<ParadoxCell> cells(thetas.size() * mus.size());
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    const double th = thetas[k / mus.size()];
    const double mu = mus[k % mus.size()];
    const auto [b, c] = lcp_coefficients(th, thetadot, mu, slip_sign, p);
    cells[k] = {th, mu, resolve_contact(b, c).outcome, b, c};
  });
  return cells;
}

}  // namespace painleve
