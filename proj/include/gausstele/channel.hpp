#pragma once

#include "gausstele/gaussian.hpp"

namespace gausstele {

/// Squeezed-thermal environment: thermal photons n_th, squeezing photons
/// n_s = sinh^2 r, and damping rate Gamma. Gamma only converts physical times
/// into the dimensionless Gamma * t used by every evolution routine.
class BathSpec {
 public:
  BathSpec(double n_th, double n_s, double gamma_rate = 1.0);

  static BathSpec vacuum() { return {0.0, 0.0}; }
  static BathSpec thermal(double n_th) { return {n_th, 0.0}; }

  double n_th() const noexcept { return n_th_; }
  double n_s() const noexcept { return n_s_; }
  double gamma_rate() const noexcept { return gamma_rate_; }

  /// Gamma * t for a physical time t.
  double scaled_time(double t) const;

 private:
  double n_th_;
  double n_s_;
  double gamma_rate_;
};

/// Effective bath occupation N and (real) phase-sensitive correlation M.
struct BathParams {
  double n;
  double m;
};

/// N = n_th + n_s (1 + 2 n_th), M = (1 + 2 n_th) sqrt(n_s (1 + n_s)).
/// Throws if the diffusion positivity bound M <= sqrt(N (N + 1)) fails.
BathParams bath_effective_params(const BathSpec& bath);

struct Diffusion {
  double plus;   ///< D_+^2, added to x-type variances
  double minus;  ///< D_-^2, added to y-type variances
};

/// D_{+-}^2(t) = (1 + 2N +- 2M)(1 - e^{-Gamma t}) / 4.
Diffusion bath_diffusion(const BathSpec& bath, double gt);
Diffusion bath_diffusion(const BathParams& params, double gt);

/// Stationary single-mode variances (1 + 2N +- 2M)/4 (x, y).
Diffusion stationary_variances(const BathParams& params);

/// Twin beam after both modes spent Gamma t in the bath. sigma1..4 are the
/// variances of the combinations (x1 + x2), (y1 + y2), (x1 - x2), (y1 - y2),
/// each divided by two (the Wigner exponent reads -(x1 + x2)^2 / (4 sigma1^2)).
class EvolvedTwinBeam {
 public:
  EvolvedTwinBeam(double sigma1_sq, double sigma2_sq, double sigma3_sq, double sigma4_sq,
                  double time_gt = 0.0);

  double sigma1_sq() const noexcept { return s1_; }
  double sigma2_sq() const noexcept { return s2_; }
  double sigma3_sq() const noexcept { return s3_; }
  double sigma4_sq() const noexcept { return s4_; }
  double time_gt() const noexcept { return gt_; }

  CovarianceMatrix4 covariance() const;

 private:
  double s1_;
  double s2_;
  double s3_;
  double s4_;
  double gt_;
};

EvolvedTwinBeam evolve_twb(const TwbSource& source, const BathSpec& bath, double gt);
/// Same evolution driven directly by (N, M); M may be negative here, which the
/// bath parametrisation never produces.
EvolvedTwinBeam evolve_twb(const TwbSource& source, const BathParams& params, double gt);

/// Single-mode propagation through the same bath: the mean decays by
/// e^{-Gamma t/2}, each variance becomes v e^{-Gamma t} + D^2(t).
GaussianWigner1M evolve_single_mode(const GaussianWigner1M& state, const BathSpec& bath, double gt);
GaussianWigner1M evolve_single_mode(const GaussianWigner1M& state, const BathParams& params,
                                    double gt);
GaussianWigner1M evolve_single_mode(const SqueezedState& state, const BathSpec& bath, double gt);

}  // namespace gausstele
