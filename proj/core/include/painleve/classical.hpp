#pragma once

// Force-based contact model: cardinal equations with Amontons-Coulomb
// friction and the normal complementarity problem
//
//   phi_y >= 0,  ypp_P = c + b phi_y >= 0,  phi_y * ypp_P = 0.
//
// Derivation of (b, c). With P = G + L(cos th, -sin th), the cardinal
// equations read
//   m xdd = phi_x,   m ydd = -m g + phi_y,
//   A thdd = -L cos(th) phi_y - L sin(th) phi_x,
// and the normal acceleration of P is ypp_P = ydd - L cos(th) thdd + L sin(th) thd^2.
// Sliding with slip sign s gives phi_x = -mu_d s phi_y; substituting,
//   b = 1/m + (L^2/A) cos(th) (cos(th) - mu_d s sin(th)),
//   c = -g + L thd^2 sin(th).
// b < 0 (the paradox) therefore needs s cos(th) > 0, i.e. a pushed rod.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "painleve/geometry.hpp"

namespace painleve {

enum class ContactOutcome { Unique, NoSolution, Multiple };

std::string_view to_string(ContactOutcome o);

/// One admissible solution of the normal complementarity problem.
struct ComplementarityPair {
  double phi_y = 0.0;  ///< normal reaction [N]
  double ypp = 0.0;    ///< normal acceleration of P [m/s^2]

  friend bool operator==(const ComplementarityPair&, const ComplementarityPair&) = default;
};

struct LcpCoefficients {
  double b = 0.0;  ///< d(ypp_P)/d(phi_y) [1/kg]
  double c = 0.0;  ///< force-free normal acceleration [m/s^2]
};

struct ContactResolution {
  double b = 0.0;
  double c = 0.0;
  ContactOutcome outcome = ContactOutcome::Unique;
  /// Admissible (phi_y, ypp) pairs: one for Unique, two (or the degenerate
  /// origin) for Multiple, none for NoSolution.
  std::vector<ComplementarityPair> candidates;

  /// Normal reaction of the unique solution. Only meaningful for Unique.
  [[nodiscard]] double phi_y() const { return candidates.empty() ? 0.0 : candidates.front().phi_y; }
};

/// |b| below this is treated as b = 0.
inline constexpr double kDegenerateB = 1e-12;

/// Dynamic friction force -mu_d |phi_y| sign(slip). Throws ZeroSlip if slip == 0.
double coulomb_tangential(double phi_y, double slip, const Params& p);

/// Static cone |fx| <= mu_s |fy| (closed).
bool stick_check(double fx, double fy, const Params& p);

/// Coefficients at angle theta, angular velocity thetadot, with friction
/// coefficient mu and slip sign s in {-1, +1}.
LcpCoefficients lcp_coefficients(double theta, double thetadot, double mu, int slip_sign,
                                 const Params& p);

/// Same, read from a sliding contact state using p.mu_d. Throws NotOnContact
/// or NotTangent when the state is not a tangent contact state.
LcpCoefficients normal_lcp_coefficients(const State& s, const Params& p, int slip_sign,
                                        double tol = kDefaultTolerance);

ContactResolution resolve_contact(double b, double c);

/// Smallest mu_d for which b(theta) < 0 somewhere in (0, pi) at slip sign s.
double critical_mu(const Params& p, int slip_sign);

struct ParadoxCell {
  double theta = 0.0;
  double mu = 0.0;
  ContactOutcome label = ContactOutcome::Unique;
  double b = 0.0;
  double c = 0.0;
};

/// Region scan over a theta x mu grid at fixed angular velocity thetadot (which
/// fixes the sign of c). Cells are ordered theta-major. Cells are evaluated
/// concurrently on up to `threads` threads (0 = hardware concurrency).
/// Throws InvalidGrid on empty grids, theta outside (0, pi) or negative mu.
std::vector<ParadoxCell> paradox_map(std::span<const double> thetas, std::span<const double> mus,
                                     const Params& p, int slip_sign, double thetadot,
                                     unsigned threads = 1);

}  // namespace painleve
