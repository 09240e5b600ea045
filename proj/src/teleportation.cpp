#include "gausstele/teleportation.hpp"

#include <cmath>
#include <numbers>

#include "gausstele/error.hpp"

namespace gausstele {

TeleportKernel::TeleportKernel(double var_re, double var_im, double cov)
    : var_re_(var_re), var_im_(var_im), cov_(cov) {}

TeleportKernel TeleportKernel::from_twin_beam(const EvolvedTwinBeam& twb) {
  return TeleportKernel(2.0 * twb.sigma3_sq(), 2.0 * twb.sigma2_sq(), 0.0);
}

TeleportKernel generalized_noise_kernel(const Eigen::Matrix2d& c) {
  if (!c.allFinite()) {
    throw DomainError(ErrorCode::non_finite_input, "noise covariance must be finite");
  }
  if (c(0, 1) != c(1, 0)) {
    throw DomainError(ErrorCode::not_positive_definite, "noise covariance must be symmetric");
  }
  const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(0, 1);
  if (c(0, 0) < 0.0 || c(1, 1) < 0.0 || det < 0.0) {
    throw DomainError(ErrorCode::not_positive_definite,
                      "noise covariance must be positive semi-definite");
  }
  return TeleportKernel(c(0, 0), c(1, 1), c(0, 1));
}

Eigen::Matrix2d TeleportKernel::covariance() const {
  Eigen::Matrix2d c;
  c << var_re_, cov_, cov_, var_im_;
  return c;
}

double TeleportKernel::density(double w_re, double w_im) const {
  const double det = var_re_ * var_im_ - cov_ * cov_;
  if (!(det > 0.0)) {
    throw DomainError(ErrorCode::not_positive_definite, "degenerate kernel has no density");
  }
  const double q = (var_im_ * w_re * w_re - 2.0 * cov_ * w_re * w_im + var_re_ * w_im * w_im) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

GaussianWigner1M TeleportKernel::apply(const GaussianWigner1M& input) const {
  return {input.mean_x(), input.mean_y(), input.var_x() + var_re_, input.var_y() + var_im_,
          input.cov_xy() + cov_};
}

GaussianWigner1M teleport_output(const SqueezedState& input, const EvolvedTwinBeam& twb) {
  return TeleportKernel::from_twin_beam(twb).apply(input.wigner());
}

double avg_fidelity_tele(double zeta, const EvolvedTwinBeam& twb) {
  detail::require_not_nan(zeta, "zeta");
  const double u = std::exp(2.0 * zeta);
  return 1.0 / std::sqrt((u + 4.0 * twb.sigma2_sq()) * (1.0 / u + 4.0 * twb.sigma3_sq()));
}

double optimal_zeta(const EvolvedTwinBeam& twb) {
  return 0.25 * std::log(twb.sigma2_sq() / twb.sigma3_sq());
}

double max_avg_fidelity(const EvolvedTwinBeam& twb) {
  return 1.0 / (1.0 + 4.0 * std::sqrt(twb.sigma2_sq() * twb.sigma3_sq()));
}

double asymptotic_tele_fidelity(double n_th) {
  detail::require_non_negative(n_th, "n_th");
  return 1.0 / (2.0 * (1.0 + n_th));
}

}  // namespace gausstele
