#pragma once

#include <array>

#include <Eigen/Dense>

namespace gausstele {

// Phase-space conventions used throughout the library
// ----------------------------------------------------
// A single mode has quadratures (x, y) with a = x + i y. The vacuum has
// variance 1/4 in each quadrature, so a coherent state |alpha> is a Gaussian
// centred at (Re alpha, Im alpha) with covariance diag(1/4, 1/4), and a
// two-mode state is separable iff the relevant variance products are >= 1/16.
// All times are dimensionless (Gamma * t) unless a name says otherwise.

inline constexpr double kVacuumVariance = 0.25;

/// Normalised single-mode Gaussian Wigner function.
///
/// W(r) = exp(-(r - m)^T S^{-1} (r - m) / 2) / (2 pi sqrt(det S)), with
/// S = [[var_x, cov_xy], [cov_xy, var_y]]. The constructor rejects any S that
/// is not positive definite.
class GaussianWigner1M {
 public:
  GaussianWigner1M(double mean_x, double mean_y, double var_x, double var_y, double cov_xy = 0.0);

  static GaussianWigner1M vacuum();
  /// Thermal state with mean photon number n: variance (1 + 2n)/4.
  static GaussianWigner1M thermal(double n);
  static GaussianWigner1M coherent(double a, double b);

  double mean_x() const noexcept { return mean_x_; }
  double mean_y() const noexcept { return mean_y_; }
  double var_x() const noexcept { return var_x_; }
  double var_y() const noexcept { return var_y_; }
  double cov_xy() const noexcept { return cov_xy_; }

  bool axis_aligned() const noexcept { return cov_xy_ == 0.0; }
  double determinant() const noexcept { return var_x_ * var_y_ - cov_xy_ * cov_xy_; }

  Eigen::Vector2d mean() const { return {mean_x_, mean_y_}; }
  Eigen::Matrix2d covariance() const;

  double density(double x, double y) const;

 private:
  double mean_x_;
  double mean_y_;
  double var_x_;
  double var_y_;
  double cov_xy_;
};

/// Single-mode squeezed coherent state D(alpha) S(zeta)|0> with real zeta.
/// Quadrature variances are e^{-2 zeta}/4 (x) and e^{2 zeta}/4 (y).
class SqueezedState {
 public:
  SqueezedState(double a, double b, double zeta);

  static SqueezedState coherent(double a, double b) { return {a, b, 0.0}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double zeta() const noexcept { return zeta_; }

  GaussianWigner1M wigner() const;

 private:
  double a_;
  double b_;
  double zeta_;
};

/// Twin-beam source with squeezing parameter lambda >= 0.
class TwbSource {
 public:
  explicit TwbSource(double lambda);

  double lambda() const noexcept { return lambda_; }
  /// x = tanh(lambda), the Fock-amplitude ratio of the twin beam.
  double x() const noexcept;

 private:
  double lambda_;
};

struct TwbVariances {
  double plus;   ///< e^{2 lambda}/4
  double minus;  ///< e^{-2 lambda}/4
};

TwbVariances twb_wigner_variances(const TwbSource& source);

/// pi * integral of W_A W_B over the plane. For a pure A this is the fidelity
/// <psi_A| rho_B |psi_A>.
double gaussian_overlap(const GaussianWigner1M& a, const GaussianWigner1M& b);

/// Symmetric positive-definite 4x4 covariance, ordering (x1, y1, x2, y2).
class CovarianceMatrix4 {
 public:
  explicit CovarianceMatrix4(const Eigen::Matrix4d& entries);

  const Eigen::Matrix4d& matrix() const noexcept { return entries_; }
  double operator()(int row, int col) const { return entries_(row, col); }

 private:
  Eigen::Matrix4d entries_;
};

/// Covariance of the evolved twin-beam Wigner function built from the four
/// variances of the (x1 + x2), (y1 + y2), (x1 - x2), (y1 - y2) combinations.
CovarianceMatrix4 covariance_from_sigmas(double sigma1_sq, double sigma2_sq, double sigma3_sq,
                                         double sigma4_sq);

/// Inverse of covariance_from_sigmas: {V11 + V13, V22 + V24, V11 - V13, V22 - V24}.
std::array<double, 4> sigmas_from_covariance(const CovarianceMatrix4& v);

/// Symplectic form Omega = diag(J, J), J = [[0, 1], [-1, 0]].
Eigen::Matrix4d symplectic_form();

}  // namespace gausstele
