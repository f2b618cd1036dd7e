#pragma once

// Impulsive constitutive characterisation of the contact/friction pair.
//
// Every reactive impulse has the form I = sigma K_S + beta K_B. A law maps an
// impacting incoming velocity p_L to (sigma, beta); the outgoing velocity is
// p_R = p_L + I. Because K_S and K_B are unit vectors of the mass metric,
// sigma and beta carry metric-weighted velocity units (kg^1/2 m/s).

#include <string_view>

#include "painleve/geometry.hpp"

namespace painleve {

enum class ImpactTag {
  ApproachingS,       ///< n_S < -tol: the endpoint moves into the line
  SeparatingS,        ///< n_S > +tol: the endpoint leaves the line
  TangentImpactB,     ///< tangent to S, on the impacting side of B
  TangentNoImpactB,   ///< tangent to S, on the non-impacting side of B
  TangentDegenerate,  ///< tangent to S with |n_B| <= tol (velocity in B)
};

struct ImpactClass {
  ImpactTag tag = ImpactTag::TangentDegenerate;
  double n_S = 0.0;
  double n_B = 0.0;

  [[nodiscard]] bool is_impact() const {
    return tag == ImpactTag::ApproachingS || tag == ImpactTag::TangentImpactB;
  }
};

/// Which side of the friction constraint counts as impacting when B is
/// unilateral.
enum class SignConvention {
  Pushed,      ///< (v_P . e_x) cos(theta) > 0 impacts (rod pushed)
  NbPositive,  ///< Phi(V_perp_B, K_B) > 0 impacts
};

enum class LawFamily {
  Rebound,     ///< sigma = 0, beta = -(1 + eps)|perp_B|
  Stop,        ///< sigma = 0, beta = -|perp_B|
  MaxBraking,  ///< beta saturates at mu_cap, sigma > 0 above the cap
  Detach,      ///< B bilateral, sigma > 0 always
};

struct ImpulseCoefficients {
  double sigma = 0.0;
  double beta = 0.0;
};

struct LawParams {
  double epsilon = 0.5;     ///< rebound factor, (0, 1)
  double mu_cap = 1.0;      ///< braking threshold on |perp_B|, > 0
  double lambda1 = 1.0;     ///< detachment gains, pushed side
  double alpha1 = 1.0;
  double lambda2 = 1.0;     ///< detachment gains, pulled side
  double alpha2 = 1.0;
  double gamma = 0.5;       ///< pulled-side braking factor, (0, 1)
  double sigma_gain = 0.0;  ///< detaching sigma per unit excess (MaxBraking) or per |perp_B| (Rebound/Stop)
  double restitution = 0.0; ///< Newtonian restitution for approaching impacts on S, [0, 1]
  bool b_unilateral = true;
  SignConvention sign_convention = SignConvention::Pushed;
  double tol = kDefaultTolerance;

  friend bool operator==(const LawParams&, const LawParams&) = default;
};

/// Which branch of a law produced the impulse.
enum class Regime {
  Rebound,
  Stop,
  ReboundDetach,
  StopDetach,
  BrakeStop,
  BrakeDetach,
  DetachPushedStop,
  DetachPushedCapped,
  DetachPulled,
  SImpact,
};

std::string_view to_string(ImpactTag tag);
std::string_view to_string(SignConvention c);
std::string_view to_string(LawFamily f);
std::string_view to_string(Regime r);

struct LawDecision {
  ImpulseCoefficients coefficients;
  Regime regime = Regime::Stop;
};

/// A law family together with validated parameters. The family fixes
/// whether B is unilateral (Rebound, Stop, MaxBraking) or bilateral (Detach).
class ConstitutiveLaw {
 public:
  /// Throws InvalidArgument when a parameter is outside its range for this family.
  ConstitutiveLaw(LawFamily family, LawParams params);

  [[nodiscard]] LawFamily family() const { return family_; }
  [[nodiscard]] const LawParams& params() const { return params_; }

  /// (sigma, beta) for a velocity tangent to S that impacts B.
  [[nodiscard]] LawDecision decide(const State& p_L, const Params& p) const;

 private:
  LawFamily family_;
  LawParams params_;
};

struct ImpactOutcome {
  State p_R;
  VerticalVector impulse;
  ImpulseCoefficients coefficients;
  Regime regime = Regime::Stop;
  double energy_delta = 0.0;  ///< kinetic energy change [J]
};

/// True when a state with normal component n_B at angle theta lies on the
/// impacting side of a unilateral B.
bool on_impacting_side(double n_B, double theta, const LawParams& lp);

ImpactClass classify(const State& s, const Params& p, const LawParams& lp);

/// Outgoing conditions: n_S > tol, or |n_S| <= tol with n_B on the
/// non-impacting side (unilateral B) or |n_B| <= tol (bilateral B).
bool is_outgoing(const State& s, const Params& p, const LawParams& lp);

/// p_R = p_L + sigma K_S + beta K_B. An approaching state first receives the
/// Newtonian S-impulse sigma_S = (1 + e)|n_S|; if that leaves it tangent and
/// impacting B, the law's (sigma, beta) is added.
/// Throws NotAnImpact if p_L does not impact and LawRejected if the result
/// is not outgoing.
ImpactOutcome apply(const ConstitutiveLaw& law, const State& p_L, const Params& p);

/// Newtonian restitution along K_S only, no tangential impulse.
ImpactOutcome apply_s_impact(const State& p_L, const Params& p, double restitution,
                             double tol = kDefaultTolerance);

enum class ReboundVariant { Rebound, Stop };

LawDecision law_rebound_stop(const State& p_L, const Params& p, const LawParams& lp,
                             ReboundVariant variant);
LawDecision law_max_braking(const State& p_L, const Params& p, const LawParams& lp);
LawDecision law_detach(const State& p_L, const Params& p, const LawParams& lp);

/// 1/2 Phi(v, v).
double kinetic_energy(const State& s, const Params& p);

}  // namespace painleve
