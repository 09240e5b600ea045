#include "gausstele/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "gausstele/error.hpp"

namespace gausstele {

GaussianWigner1M::GaussianWigner1M(double mean_x, double mean_y, double var_x, double var_y,
                                   double cov_xy)
    : mean_x_(mean_x), mean_y_(mean_y), var_x_(var_x), var_y_(var_y), cov_xy_(cov_xy) {
  detail::require_not_nan(mean_x, "mean_x");
  detail::require_not_nan(mean_y, "mean_y");
  detail::require_not_nan(cov_xy, "cov_xy");
  detail::require_positive(var_x, "var_x");
  detail::require_positive(var_y, "var_y");
  if (!std::isfinite(var_x) || !std::isfinite(var_y) || !std::isfinite(cov_xy) ||
      !std::isfinite(mean_x) || !std::isfinite(mean_y)) {
    throw DomainError(ErrorCode::non_finite_input, "Gaussian parameters must be finite");
  }
  if (!(determinant() > 0.0)) {
    throw DomainError(ErrorCode::not_positive_definite,
                      "covariance must satisfy var_x * var_y - cov_xy^2 > 0");
  }
}

GaussianWigner1M GaussianWigner1M::vacuum() {
  return {0.0, 0.0, kVacuumVariance, kVacuumVariance};
}

GaussianWigner1M GaussianWigner1M::thermal(double n) {
  detail::require_non_negative(n, "n");
  const double v = (1.0 + 2.0 * n) * kVacuumVariance;
  return {0.0, 0.0, v, v};
}

GaussianWigner1M GaussianWigner1M::coherent(double a, double b) {
  return {a, b, kVacuumVariance, kVacuumVariance};
}

Eigen::Matrix2d GaussianWigner1M::covariance() const {
  Eigen::Matrix2d s;
  s << var_x_, cov_xy_, cov_xy_, var_y_;
  return s;
}

double GaussianWigner1M::density(double x, double y) const {
  const double det = determinant();
  const double dx = x - mean_x_;
  const double dy = y - mean_y_;
  const double q = (var_y_ * dx * dx - 2.0 * cov_xy_ * dx * dy + var_x_ * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

SqueezedState::SqueezedState(double a, double b, double zeta) : a_(a), b_(b), zeta_(zeta) {
  detail::require_not_nan(a, "a");
  detail::require_not_nan(b, "b");
  detail::require_not_nan(zeta, "zeta");
}

GaussianWigner1M SqueezedState::wigner() const {
  return {a_, b_, std::exp(-2.0 * zeta_) * kVacuumVariance, std::exp(2.0 * zeta_) * kVacuumVariance};
}

TwbSource::TwbSource(double lambda) : lambda_(lambda) {
  // A negative lambda is the same resource with the modes relabelled.
  detail::require_non_negative(lambda, "lambda");
}

double TwbSource::x() const noexcept { return std::tanh(lambda_); }

TwbVariances twb_wigner_variances(const TwbSource& source) {
  const double l = source.lambda();
  return {std::exp(2.0 * l) * kVacuumVariance, std::exp(-2.0 * l) * kVacuumVariance};
}

double gaussian_overlap(const GaussianWigner1M& a, const GaussianWigner1M& b) {
  // pi * N(m_a - m_b; 0, S_a + S_b)
  const double sxx = a.var_x() + b.var_x();
  const double syy = a.var_y() + b.var_y();
  const double sxy = a.cov_xy() + b.cov_xy();
  const double det = sxx * syy - sxy * sxy;
  if (!(det > 0.0)) {
    throw DomainError(ErrorCode::not_positive_definite, "summed covariance is singular");
  }
  const double dx = a.mean_x() - b.mean_x();
  const double dy = a.mean_y() - b.mean_y();
  const double q = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * std::sqrt(det));
}

CovarianceMatrix4::CovarianceMatrix4(const Eigen::Matrix4d& entries) : entries_(entries) {
  if (!entries_.allFinite()) {
    throw DomainError(ErrorCode::non_finite_input, "covariance entries must be finite");
  }
  const double scale = entries_.cwiseAbs().maxCoeff();
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw DomainError(ErrorCode::not_positive_definite, "covariance matrix is not symmetric");
  }
  Eigen::LLT<Eigen::Matrix4d> llt(entries_);
  if (llt.info() != Eigen::Success) {
    throw DomainError(ErrorCode::not_positive_definite, "covariance matrix is not positive definite");
  }
}

CovarianceMatrix4 covariance_from_sigmas(double sigma1_sq, double sigma2_sq, double sigma3_sq,
                                         double sigma4_sq) {
  detail::require_positive(sigma1_sq, "sigma1_sq");
  detail::require_positive(sigma2_sq, "sigma2_sq");
  detail::require_positive(sigma3_sq, "sigma3_sq");
  detail::require_positive(sigma4_sq, "sigma4_sq");
  const double xd = 0.5 * (sigma1_sq + sigma3_sq);
  const double yd = 0.5 * (sigma2_sq + sigma4_sq);
  const double xo = 0.5 * (sigma1_sq - sigma3_sq);
  const double yo = 0.5 * (sigma2_sq - sigma4_sq);
  Eigen::Matrix4d v;
  // clang-format off
  v << xd,  0.0, xo,  0.0,
       0.0, yd,  0.0, yo,
       xo,  0.0, xd,  0.0,
       0.0, yo,  0.0, yd;
  // clang-format on
  return CovarianceMatrix4(v);
}

std::array<double, 4> sigmas_from_covariance(const CovarianceMatrix4& v) {
  return {v(0, 0) + v(0, 2), v(1, 1) + v(1, 3), v(0, 0) - v(0, 2), v(1, 1) - v(1, 3)};
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

}  // namespace gausstele
