#include "painleve/impact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Detaching branches must clear the tangency band, otherwise p_R would be
// classified as tangent and the law would not produce an outgoing velocity.
double detaching_sigma(double sigma, const LawParams& lp) { return std::max(sigma, 2.0 * lp.tol); }

// Shared precondition of the unilateral laws: tangent to S, impacting B.
Decomposition require_unilateral_b_impact(const State& p_L, const Params& p, const LawParams& lp,
                                          const char* law) {
  LawParams unilateral = lp;
  unilateral.b_unilateral = true;
  const auto cls = classify(p_L, p, unilateral);
  if (cls.tag != ImpactTag::TangentImpactB) {
    std::ostringstream msg;
    msg << law << ": incoming velocity is not a tangent impact against B (" << to_string(cls.tag)
        << ")";
    throw NotAnImpact(msg.str());
  }
  return decompose(p_L, p, lp.tol);
}

}  // namespace

std::string_view to_string(ImpactTag tag) {
  switch (tag) {
    case ImpactTag::ApproachingS: return "ApproachingS";
    case ImpactTag::SeparatingS: return "SeparatingS";
    case ImpactTag::TangentImpactB: return "TangentImpactB";
    case ImpactTag::TangentNoImpactB: return "TangentNoImpactB";
    case ImpactTag::TangentDegenerate: return "TangentDegenerate";
  }
  return "?";
}

std::string_view to_string(SignConvention c) {
  switch (c) {
    case SignConvention::Pushed: return "pushed";
    case SignConvention::NbPositive: return "nb_positive";
  }
  return "?";
}

std::string_view to_string(LawFamily f) {
  switch (f) {
    case LawFamily::Rebound: return "rebound";
    case LawFamily::Stop: return "stop";
    case LawFamily::MaxBraking: return "max_braking";
    case LawFamily::Detach: return "detach";
  }
  return "?";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Rebound: return "rebound";
    case Regime::Stop: return "stop";
    case Regime::ReboundDetach: return "rebound_detach";
    case Regime::StopDetach: return "stop_detach";
    case Regime::BrakeStop: return "brake_stop";
    case Regime::BrakeDetach: return "brake_detach";
    case Regime::DetachPushedStop: return "detach_pushed_stop";
    case Regime::DetachPushedCapped: return "detach_pushed_capped";
    case Regime::DetachPulled: return "detach_pulled";
    case Regime::SImpact: return "s_impact";
  }
  return "?";
}

ConstitutiveLaw::ConstitutiveLaw(LawFamily family, LawParams params)
    : family_(family), params_(params) {
  const auto& lp = params_;
  require(std::isfinite(lp.tol) && lp.tol > 0.0, "tolerance must be positive");
  require(lp.restitution >= 0.0 && lp.restitution <= 1.0, "restitution must lie in [0, 1]");
  switch (family_) {
    case LawFamily::Rebound:
      require(lp.epsilon > 0.0 && lp.epsilon < 1.0, "rebound law needs epsilon in (0, 1)");
      [[fallthrough]];
    case LawFamily::Stop:
      require(std::isfinite(lp.sigma_gain) && lp.sigma_gain >= 0.0, "sigma_gain must be >= 0");
      params_.b_unilateral = true;
      break;
    case LawFamily::MaxBraking:
      require(std::isfinite(lp.mu_cap) && lp.mu_cap > 0.0, "max-braking law needs mu_cap > 0");
      require(std::isfinite(lp.sigma_gain) && lp.sigma_gain > 0.0,
              "max-braking law needs sigma_gain > 0");
      params_.b_unilateral = true;
      break;
    case LawFamily::Detach:
      require(lp.lambda1 > 0.0 && lp.lambda2 > 0.0 && lp.alpha1 > 0.0 && lp.alpha2 > 0.0,
              "detach law needs positive lambda1, lambda2, alpha1, alpha2");
      require(std::isfinite(lp.lambda1 + lp.lambda2 + lp.alpha1 + lp.alpha2),
              "detach gains must be finite");
      require(std::isfinite(lp.mu_cap) && lp.mu_cap > 0.0, "detach law needs mu_cap > 0");
      require(lp.gamma > 0.0 && lp.gamma < 1.0, "detach law needs gamma in (0, 1)");
      params_.b_unilateral = false;
      break;
  }
}

LawDecision ConstitutiveLaw::decide(const State& p_L, const Params& p) const {
  switch (family_) {
    case LawFamily::Rebound: return law_rebound_stop(p_L, p, params_, ReboundVariant::Rebound);
    case LawFamily::Stop: return law_rebound_stop(p_L, p, params_, ReboundVariant::Stop);
    case LawFamily::MaxBraking: return law_max_braking(p_L, p, params_);
    case LawFamily::Detach: return law_detach(p_L, p, params_);
  }
  throw InvalidArgument("unknown law family");
}

bool on_impacting_side(double n_B, double theta, const LawParams& lp) {
  switch (lp.sign_convention) {
    case SignConvention::Pushed: return n_B * std::cos(theta) > lp.tol;
    case SignConvention::NbPositive: return n_B > lp.tol;
  }
  return false;
}

ImpactClass classify(const State& s, const Params& p, const LawParams& lp) {
  const auto d = decompose(s, p, lp.tol);
  ImpactClass out{ImpactTag::TangentDegenerate, d.n_S, d.n_B};
  if (d.n_S < -lp.tol) {
    out.tag = ImpactTag::ApproachingS;
  } else if (d.n_S > lp.tol) {
    out.tag = ImpactTag::SeparatingS;
  } else if (std::abs(d.n_B) <= lp.tol) {
    out.tag = ImpactTag::TangentDegenerate;
  } else if (!lp.b_unilateral) {
    out.tag = ImpactTag::TangentImpactB;
  } else {
    out.tag = on_impacting_side(d.n_B, s.config.theta, lp) ? ImpactTag::TangentImpactB
                                                           : ImpactTag::TangentNoImpactB;
  }
  return out;
}

bool is_outgoing(const State& s, const Params& p, const LawParams& lp) {
  const auto cls = classify(s, p, lp);
  return cls.tag == ImpactTag::SeparatingS || cls.tag == ImpactTag::TangentNoImpactB ||
         cls.tag == ImpactTag::TangentDegenerate;
}

LawDecision law_rebound_stop(const State& p_L, const Params& p, const LawParams& lp,
                             ReboundVariant variant) {
  const auto d = require_unilateral_b_impact(p_L, p, lp, "rebound/stop law");
  const double size = std::abs(d.n_B);
  const double dir = sign_of(d.n_B);
  LawDecision out;
  if (variant == ReboundVariant::Rebound) {
    out.coefficients.beta = -dir * (1.0 + lp.epsilon) * size;
    out.regime = Regime::Rebound;
  } else {
    out.coefficients.beta = -dir * size;
    out.regime = Regime::Stop;
  }
  if (lp.sigma_gain > 0.0) {
    out.coefficients.sigma = detaching_sigma(lp.sigma_gain * size, lp);
    out.regime = variant == ReboundVariant::Rebound ? Regime::ReboundDetach : Regime::StopDetach;
  }
  return out;
}

LawDecision law_max_braking(const State& p_L, const Params& p, const LawParams& lp) {
  const auto d = require_unilateral_b_impact(p_L, p, lp, "max-braking law");
  const double size = std::abs(d.n_B);
  const double dir = sign_of(d.n_B);
  LawDecision out;
  if (size <= lp.mu_cap) {
    out.coefficients = {0.0, -dir * size};
    out.regime = Regime::BrakeStop;
  } else {
    out.coefficients = {detaching_sigma(lp.sigma_gain * (size - lp.mu_cap), lp), -dir * lp.mu_cap};
    out.regime = Regime::BrakeDetach;
  }
  return out;
}

LawDecision law_detach(const State& p_L, const Params& p, const LawParams& lp) {
  const auto d = decompose(p_L, p, lp.tol);
  if (std::abs(d.n_S) > lp.tol || std::abs(d.n_B) <= lp.tol) {
    throw NotAnImpact("detach law: incoming velocity must be tangent to S with n_B != 0");
  }
  const double size = std::abs(d.n_B);
  const double dir = sign_of(d.n_B);
  const bool pushed = on_impacting_side(d.n_B, p_L.config.theta, lp);

  LawDecision out;
  if (pushed) {
    out.coefficients.sigma = detaching_sigma((lp.lambda1 * p.m + lp.alpha1 * p.A) * size, lp);
    if (size <= lp.mu_cap) {
      out.coefficients.beta = -dir * size;
      out.regime = Regime::DetachPushedStop;
    } else {
      out.coefficients.beta = -dir * lp.mu_cap;
      out.regime = Regime::DetachPushedCapped;
    }
  } else {
    out.coefficients.sigma = detaching_sigma((lp.lambda2 * p.m + lp.alpha2 * p.A) * size, lp);
    out.coefficients.beta = -dir * lp.gamma * size;
    out.regime = Regime::DetachPulled;
  }
  return out;
}

ImpactOutcome apply(const ConstitutiveLaw& law, const State& p_L, const Params& p) {
  const auto& lp = law.params();
  const auto cls = classify(p_L, p, lp);
  if (!cls.is_impact()) {
    std::ostringstream msg;
    msg << "incoming velocity does not impact (" << to_string(cls.tag) << ")";
    throw NotAnImpact(msg.str());
  }

  const double theta = p_L.config.theta;
  const auto ks = k_S(theta, p);
  const auto kb = k_B(theta, p);

  ImpactOutcome out;
  State tangent = p_L;
  if (cls.tag == ImpactTag::ApproachingS) {
    out.coefficients.sigma = (1.0 + lp.restitution) * -cls.n_S;
    out.regime = Regime::SImpact;
    tangent.vel += out.coefficients.sigma * ks;
  }
  if (classify(tangent, p, lp).tag == ImpactTag::TangentImpactB) {
    const auto decision = law.decide(tangent, p);
    out.coefficients.sigma += decision.coefficients.sigma;
    out.coefficients.beta += decision.coefficients.beta;
    out.regime = decision.regime;
  }

  out.p_R = p_L;
  if (out.regime == Regime::Stop || out.regime == Regime::BrakeStop) {
    // Full cancellation of both normal parts: land on B exactly.
    out.p_R.vel = decompose(p_L, p, lp.tol).par_B;
    out.p_R.vel.dx -= friction_residual(out.p_R, p);
    out.impulse = out.p_R.vel - p_L.vel;
  } else {
    out.impulse = out.coefficients.sigma * ks + out.coefficients.beta * kb;
    out.p_R.vel += out.impulse;
  }
  if (!is_outgoing(out.p_R, p, lp)) {
    std::ostringstream msg;
    msg << to_string(law.family()) << " law produced a non-outgoing velocity ("
        << to_string(classify(out.p_R, p, lp).tag) << ")";
    throw LawRejected(msg.str());
  }
  out.energy_delta = kinetic_energy(out.p_R, p) - kinetic_energy(p_L, p);
  return out;
}

ImpactOutcome apply_s_impact(const State& p_L, const Params& p, double restitution, double tol) {
  const auto d = decompose(p_L, p, tol);
  if (!(d.n_S < -tol)) throw NotAnImpact("S-impact requires an approaching velocity");
  ImpactOutcome out;
  out.coefficients.sigma = (1.0 + restitution) * -d.n_S;
  out.regime = Regime::SImpact;
  out.impulse = out.coefficients.sigma * k_S(p_L.config.theta, p);
  out.p_R = p_L;
  out.p_R.vel += out.impulse;
  out.energy_delta = kinetic_energy(out.p_R, p) - kinetic_energy(p_L, p);
  return out;
}

double kinetic_energy(const State& s, const Params& p) { return 0.5 * inner(p, s.vel, s.vel); }

}  // namespace painleve
