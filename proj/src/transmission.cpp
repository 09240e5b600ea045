#include "gausstele/transmission.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gausstele/error.hpp"
#include "gausstele/teleportation.hpp"

namespace gausstele {

AmplitudeEnsemble::AmplitudeEnsemble(double delta_sq) : delta_sq_(delta_sq) {
  detail::require_non_negative(delta_sq, "delta_sq");
  if (!std::isfinite(delta_sq)) {
    throw DomainError(ErrorCode::non_finite_input, "delta_sq must be finite");
  }
}

double AmplitudeEnsemble::density(double a, double b) const {
  if (delta_sq_ == 0.0) {
    throw DomainError(ErrorCode::non_positive_variance, "point-mass ensemble has no density");
  }
  return std::exp(-(a * a + b * b) / (2.0 * delta_sq_)) / (2.0 * std::numbers::pi * delta_sq_);
}

DirectVariances direct_variances(double zeta, const BathSpec& bath, double gt_direct) {
  detail::require_not_nan(zeta, "zeta");
  const Diffusion d = bath_diffusion(bath, gt_direct);
  const double keep = (1.0 + std::exp(-gt_direct)) * kVacuumVariance;
  return {std::exp(-2.0 * zeta) * keep + d.plus, std::exp(2.0 * zeta) * keep + d.minus};
}

namespace {

// 1 - e^{-Gamma t'/2}: fraction of the amplitude lost on the line.
double amplitude_loss(double gt_direct) { return -std::expm1(-0.5 * gt_direct); }

}  // namespace

double direct_fidelity(const SqueezedState& state, const BathSpec& bath, double gt_direct,
                       FormulaVariant variant) {
  const DirectVariances s = direct_variances(state.zeta(), bath, gt_direct);
  const double loss = amplitude_loss(gt_direct);
  const double loss_b =
      variant == FormulaVariant::validated ? loss : 1.0 + std::exp(-0.5 * gt_direct);
  const double exponent = state.a() * state.a() * loss * loss / (2.0 * s.a_sq) +
                          state.b() * state.b() * loss_b * loss_b / (2.0 * s.b_sq);
  return std::exp(-exponent) / (2.0 * std::sqrt(s.a_sq * s.b_sq));
}

double avg_direct_fidelity(double zeta, const AmplitudeEnsemble& ensemble, const BathSpec& bath,
                           double gt_direct, FormulaVariant variant) {
  const DirectVariances s = direct_variances(zeta, bath, gt_direct);
  const double loss = amplitude_loss(gt_direct);
  const double weight = variant == FormulaVariant::validated ? loss * loss : loss;
  const double spread = weight * ensemble.delta_sq();
  return 0.5 / std::sqrt((spread + s.a_sq) * (spread + s.b_sq));
}

AsymptoticG asymptotic_g(const BathSpec& bath, const AmplitudeEnsemble& ensemble) {
  const double ns = bath.n_s();
  const double nth = bath.n_th();
  const double root = std::sqrt(ns * (1.0 + ns));
  const double base = 1.0 + 8.0 * ns * (1.0 + ns);
  const double cross = 4.0 * (1.0 + 2.0 * ns) * root;
  const double linear = ns + nth + 2.0 * ns * nth;
  const double corr = (1.0 + 2.0 * nth) * root;
  // base - cross = e^{-4r} >= 0 analytically; clamp rounding below zero.
  const double plus = 0.25 * (1.0 + std::sqrt(base + cross) + 2.0 * (linear + corr));
  const double minus = 0.25 * (1.0 + std::sqrt(std::max(0.0, base - cross)) + 2.0 * (linear - corr));
  return {plus + ensemble.delta_sq(), minus + ensemble.delta_sq()};
}

double asymptotic_direct_fidelity(const BathSpec& bath, const AmplitudeEnsemble& ensemble) {
  const AsymptoticG g = asymptotic_g(bath, ensemble);
  return 0.5 / std::sqrt(g.plus * g.minus);
}

double delta_threshold(const TwbSource& source, const BathSpec& bath, double gt,
                       std::optional<double> zeta) {
  detail::require_not_nan(gt, "time_gt");
  if (!(gt > 0.0)) {
    throw DomainError(ErrorCode::degenerate_time, "delta_threshold needs Gamma t > 0");
  }
  const EvolvedTwinBeam twb = evolve_twb(source, bath, gt);
  const double z = zeta.value_or(optimal_zeta(twb));
  const double f_tele = avg_fidelity_tele(z, twb);
  const DirectVariances s = direct_variances(z, bath, kDirectLineFactor * gt);
  const double loss = -std::expm1(-gt);  // 1 - e^{-Gamma t'/2} at t' = 2t
  const double diff = s.a_sq - s.b_sq;
  const double root = std::sqrt(diff * diff + 1.0 / (f_tele * f_tele));
  return (root - (s.a_sq + s.b_sq)) / (2.0 * loss * loss);
}

double delta_threshold_zero_noise(const TwbSource& source, double gt, FormulaVariant variant) {
  detail::require_not_nan(gt, "time_gt");
  if (!(gt > 0.0)) {
    throw DomainError(ErrorCode::degenerate_time, "delta_threshold needs Gamma t > 0");
  }
  const double decay = std::exp(-gt);
  const double loss = -std::expm1(-gt);
  const double numerator = std::expm1(gt) + std::exp(-2.0 * source.lambda());
  const double denominator = 2.0 * loss * loss;
  return variant == FormulaVariant::validated ? decay * numerator / denominator
                                              : numerator / (decay * denominator);
}

LinkComparison compare_links(const TwbSource& source, const BathSpec& bath, double gt,
                             std::span<const AmplitudeEnsemble> ensembles,
                             std::optional<double> zeta) {
  const EvolvedTwinBeam twb = evolve_twb(source, bath, gt);
  LinkComparison out;
  out.gt = gt;
  out.gt_direct = kDirectLineFactor * gt;
  out.zeta = zeta.value_or(optimal_zeta(twb));
  out.f_tele = avg_fidelity_tele(out.zeta, twb);
  out.f_direct.reserve(ensembles.size());
  for (const AmplitudeEnsemble& e : ensembles) {
    out.f_direct.push_back(avg_direct_fidelity(out.zeta, e, bath, out.gt_direct));
  }
  out.delta_threshold_sq = gt > 0.0 ? delta_threshold(source, bath, gt, out.zeta)
                                    : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace gausstele
