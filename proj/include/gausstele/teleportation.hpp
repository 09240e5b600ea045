#pragma once

#include <Eigen/Dense>

#include "gausstele/channel.hpp"
#include "gausstele/gaussian.hpp"

namespace gausstele {

/// Gaussian displacement-noise map rho -> integral d^2w K(w) D(w) rho D(w)^dag.
/// K is a zero-mean Gaussian over w = (Re w, Im w) with covariance `covariance()`.
/// Acting on a Gaussian Wigner function it keeps the mean and adds the kernel
/// covariance.
class TeleportKernel {
 public:
  /// Kernel of a twin beam shared through the bath: covariance diag(2 sigma3^2, 2 sigma2^2).
  static TeleportKernel from_twin_beam(const EvolvedTwinBeam& twb);

  double var_re() const noexcept { return var_re_; }
  double var_im() const noexcept { return var_im_; }
  double cov() const noexcept { return cov_; }
  Eigen::Matrix2d covariance() const;

  /// Kernel density at w; integrates to one over the plane.
  double density(double w_re, double w_im) const;

  GaussianWigner1M apply(const GaussianWigner1M& input) const;

 private:
  friend TeleportKernel generalized_noise_kernel(const Eigen::Matrix2d& c);
  TeleportKernel(double var_re, double var_im, double cov);

  double var_re_;
  double var_im_;
  double cov_;
};

/// Kernel for a general Gaussian noise with displacement covariance C.
/// C must be symmetric positive semi-definite; C = 0 is the identity map.
TeleportKernel generalized_noise_kernel(const Eigen::Matrix2d& c);

/// Output of continuous-variable teleportation of `input` using the degraded
/// twin beam. Mean is preserved; variances grow by 2 sigma3^2 (x) and 2 sigma2^2 (y).
GaussianWigner1M teleport_output(const SqueezedState& input, const EvolvedTwinBeam& twb);

/// Average teleportation fidelity for squeezing zeta, independent of alpha:
/// 1 / sqrt((e^{2 zeta} + 4 sigma2^2)(e^{-2 zeta} + 4 sigma3^2)).
double avg_fidelity_tele(double zeta, const EvolvedTwinBeam& twb);

/// zeta maximising avg_fidelity_tele: log(sigma2 / sigma3) / 2.
double optimal_zeta(const EvolvedTwinBeam& twb);

/// 1 / (1 + 4 sigma2 sigma3), the fidelity at optimal_zeta.
double max_avg_fidelity(const EvolvedTwinBeam& twb);

/// Long-time limit 1 / (2 (1 + n_th)) of max_avg_fidelity.
double asymptotic_tele_fidelity(double n_th);

/// Fidelity achievable without shared entanglement.
inline constexpr double kClassicalFidelityLimit = 0.5;

}  // namespace gausstele
