#include "gausstele/channel.hpp"

#include <cmath>

#include "gausstele/error.hpp"

namespace gausstele {

BathSpec::BathSpec(double n_th, double n_s, double gamma_rate)
    : n_th_(n_th), n_s_(n_s), gamma_rate_(gamma_rate) {
  detail::require_non_negative(n_th, "n_th");
  detail::require_non_negative(n_s, "n_s");
  detail::require_not_nan(gamma_rate, "gamma_rate");
  if (!(gamma_rate > 0.0) || !std::isfinite(gamma_rate)) {
    throw DomainError(ErrorCode::negative_parameter, "gamma_rate must be positive and finite");
  }
  if (!std::isfinite(n_th) || !std::isfinite(n_s)) {
    throw DomainError(ErrorCode::non_finite_input, "photon numbers must be finite");
  }
}

double BathSpec::scaled_time(double t) const {
  detail::require_non_negative(t, "t");
  return gamma_rate_ * t;
}

BathParams bath_effective_params(const BathSpec& bath) {
  const double nth = bath.n_th();
  const double ns = bath.n_s();
  const BathParams p{nth + ns * (1.0 + 2.0 * nth), (1.0 + 2.0 * nth) * std::sqrt(ns * (1.0 + ns))};
  // M^2 = N(N+1) - n_th(1+n_th): the bound is an identity of the parametrisation
  // but is still checked so a regression in the formulas cannot slip through.
  const double bound = std::sqrt(p.n * (p.n + 1.0));
  if (p.m > bound * (1.0 + 1e-14) + 1e-300) {
    throw DomainError(ErrorCode::not_positive_definite,
                      "bath violates diffusion positivity M <= sqrt(N(N+1))");
  }
  return p;
}

namespace {

void require_time(double gt) {
  detail::require_non_negative(gt, "time_gt");
}

// 1 - e^{-gt} without cancellation at small gt.
double relaxed_fraction(double gt) { return -std::expm1(-gt); }

}  // namespace

Diffusion stationary_variances(const BathParams& params) {
  return {(1.0 + 2.0 * params.n + 2.0 * params.m) * kVacuumVariance,
          (1.0 + 2.0 * params.n - 2.0 * params.m) * kVacuumVariance};
}

Diffusion bath_diffusion(const BathParams& params, double gt) {
  require_time(gt);
  const Diffusion inf = stationary_variances(params);
  const double f = relaxed_fraction(gt);
  return {inf.plus * f, inf.minus * f};
}

Diffusion bath_diffusion(const BathSpec& bath, double gt) {
  return bath_diffusion(bath_effective_params(bath), gt);
}

EvolvedTwinBeam::EvolvedTwinBeam(double sigma1_sq, double sigma2_sq, double sigma3_sq,
                                 double sigma4_sq, double time_gt)
    : s1_(sigma1_sq), s2_(sigma2_sq), s3_(sigma3_sq), s4_(sigma4_sq), gt_(time_gt) {
  detail::require_positive(sigma1_sq, "sigma1_sq");
  detail::require_positive(sigma2_sq, "sigma2_sq");
  detail::require_positive(sigma3_sq, "sigma3_sq");
  detail::require_positive(sigma4_sq, "sigma4_sq");
  require_time(time_gt);
}

CovarianceMatrix4 EvolvedTwinBeam::covariance() const {
  return covariance_from_sigmas(s1_, s2_, s3_, s4_);
}

EvolvedTwinBeam evolve_twb(const TwbSource& source, const BathParams& params, double gt) {
  require_time(gt);
  const TwbVariances sigma = twb_wigner_variances(source);
  const Diffusion d = bath_diffusion(params, gt);
  const double decay = std::exp(-gt);
  return {sigma.plus * decay + d.plus, sigma.minus * decay + d.minus,
          sigma.minus * decay + d.plus, sigma.plus * decay + d.minus, gt};
}

EvolvedTwinBeam evolve_twb(const TwbSource& source, const BathSpec& bath, double gt) {
  return evolve_twb(source, bath_effective_params(bath), gt);
}

GaussianWigner1M evolve_single_mode(const GaussianWigner1M& state, const BathParams& params,
                                    double gt) {
  require_time(gt);
  const Diffusion d = bath_diffusion(params, gt);
  const double decay = std::exp(-gt);
  const double amp = std::exp(-0.5 * gt);
  return {state.mean_x() * amp, state.mean_y() * amp, state.var_x() * decay + d.plus,
          state.var_y() * decay + d.minus, state.cov_xy() * decay};
}

GaussianWigner1M evolve_single_mode(const GaussianWigner1M& state, const BathSpec& bath,
                                    double gt) {
  return evolve_single_mode(state, bath_effective_params(bath), gt);
}

GaussianWigner1M evolve_single_mode(const SqueezedState& state, const BathSpec& bath, double gt) {
  return evolve_single_mode(state.wigner(), bath, gt);
}

}  // namespace gausstele
