#pragma once

// Seeded generators and independent oracles shared by the test binaries.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "painleve/classical.hpp"
#include "painleve/geometry.hpp"

namespace painleve::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int sign() { return uniform(0.0, 1.0) < 0.5 ? -1 : 1; }

  Params params() {
    Params p;
    p.m = log_uniform(0.1, 10.0);
    p.L = log_uniform(0.1, 5.0);
    p.A = p.m * p.L * p.L * log_uniform(0.02, 3.0);
    p.g = uniform(0.0, 20.0);
    return p;
  }

  double theta() { return uniform(0.02, std::numbers::pi - 0.02); }

  VerticalVector velocity(double scale = 3.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

  /// On the contact line with an arbitrary velocity.
  State contact_state(const Params& p) {
    const double th = theta();
    return {{0.0, uniform(-1.0, 1.0), p.L * std::sin(th), th}, velocity()};
  }

  /// On the contact line, velocity tangent to it.
  State tangent_state(const Params& p) {
    return tangent_contact_state(theta(), uniform(-3.0, 3.0), uniform(-3.0, 3.0), p,
                                 uniform(-1.0, 1.0));
  }

 private:
  std::mt19937_64 rng_;
};

inline Eigen::Matrix3d metric(const Params& p) { return Eigen::Vector3d(p.m, p.m, p.A).asDiagonal(); }

inline Eigen::Vector3d vec(const VerticalVector& v) { return {v.dx, v.dy, v.dtheta}; }

/// Phi-orthogonal projection onto the column span of `basis`, from the
/// normal equations (B^T M B) a = B^T M v.
inline Eigen::Vector3d project(const Eigen::MatrixXd& basis, const Eigen::Vector3d& v,
                               const Params& p) {
  const Eigen::Matrix3d M = metric(p);
  const Eigen::MatrixXd gram = basis.transpose() * M * basis;
  const Eigen::VectorXd a = gram.ldlt().solve(basis.transpose() * M * v);
  return basis * a;
}

/// Spanning vectors of the velocities tangent to S: dy = L cos(th) dtheta.
inline Eigen::MatrixXd tangent_basis(double th, const Params& p) {
  Eigen::MatrixXd b(3, 2);
  b << 1.0, 0.0, 0.0, p.L * std::cos(th), 0.0, 1.0;
  return b;
}

/// Spanning vector of V(B): rotation about the resting contact point.
inline Eigen::MatrixXd b_basis(double th, const Params& p) {
  Eigen::MatrixXd b(3, 1);
  b << p.L * std::sin(th), p.L * std::cos(th), 1.0;
  return b;
}

/// Normal acceleration of P in sliding contact, by solving the Newton-Euler
/// system for (xdd, ydd, thdd) at two values of phi_y: ypp_P is affine in
/// phi_y, so two evaluations give (b, c).
struct NormalAccel {
  double b;
  double c;
};

inline NormalAccel newton_euler_normal_accel(double th, double thd, double mu, int s,
                                             const Params& p) {
  auto ypp = [&](double phi_y) {
    const double phi_x = -mu * s * phi_y;
    // Torque about G of the force at P, with P - G = L(cos th, -sin th):
    // z = rx*Fy - ry*Fx. theta is measured clockwise, so thdd = -z/A.
    const double rx = p.L * std::cos(th);
    const double ry = -p.L * std::sin(th);
    const double torque = rx * phi_y - ry * phi_x;
    const double ydd = -p.g + phi_y / p.m;
    const double thdd = -torque / p.A;
    // y_P = y - L sin(th)
    return ydd - p.L * std::cos(th) * thdd + p.L * std::sin(th) * thd * thd;
  };
  const double c = ypp(0.0);
  return {ypp(1.0) - c, c};
}

/// Enumerates the two complementarity branches phi_y = 0 and ypp = 0.
inline ContactOutcome enumerate_lcp(double b, double c, std::vector<ComplementarityPair>& found) {
  found.clear();
  if (c >= 0.0) found.push_back({0.0, c});
  if (b != 0.0) {
    const double phi = -c / b;
    if (phi > 0.0) found.push_back({phi, 0.0});
  }
  if (found.empty()) return ContactOutcome::NoSolution;
  return found.size() == 1 ? ContactOutcome::Unique : ContactOutcome::Multiple;
}

/// Smallest mu with min over theta of b(theta; mu) < 0 for a pushed slip,
/// found by bisection on mu; the minimum over theta comes from a dense grid
/// refined by golden-section search around the best node.
inline double grid_critical_mu(const Params& p) {
  auto min_b = [&](double mu) {
    auto b = [&](double th) { return newton_euler_normal_accel(th, 0.0, mu, 1, p).b; };
    constexpr int kNodes = 20000;
    const double h = std::numbers::pi / kNodes;
    int best = 1;
    for (int i = 2; i < kNodes; ++i) {
      if (b(i * h) < b(best * h)) best = i;
    }
    double lo = (best - 1) * h, hi = (best + 1) * h;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double a = hi - r * (hi - lo), d = lo + r * (hi - lo);
      if (b(a) < b(d)) {
        hi = d;
      } else {
        lo = a;
      }
    }
    return b(0.5 * (lo + hi));
  };
  double lo = 0.0, hi = 1.0;
  while (min_b(hi) >= 0.0) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_b(mid) < 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace painleve::testing
