#include "gausstele/separability.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gausstele/error.hpp"

namespace gausstele {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundarySlack = 64.0 * std::numeric_limits<double>::epsilon();

}  // namespace

PptProducts ppt_products(const EvolvedTwinBeam& twb) {
  return {twb.sigma1_sq() * twb.sigma4_sq(), twb.sigma2_sq() * twb.sigma3_sq()};
}

bool is_separable(const EvolvedTwinBeam& twb) {
  const PptProducts p = ppt_products(twb);
  const double bound = kSeparabilityBound * (1.0 - kBoundarySlack);
  return p.x_pair >= bound && p.y_pair >= bound;
}

double min_symplectic_eigenvalue_pt(const CovarianceMatrix4& v) {
  // Partial transposition flips the sign of y2.
  Eigen::Matrix4d flip = Eigen::Matrix4d::Identity();
  flip(3, 3) = -1.0;
  const Eigen::Matrix4d pt = flip * v.matrix() * flip;
  // Eigenvalues of Omega * V are +-i nu_k.
  const Eigen::Matrix4d m = symplectic_form() * pt;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m, false);
  double nu = kInf;
  for (int i = 0; i < 4; ++i) {
    nu = std::min(nu, std::abs(solver.eigenvalues()(i)));
  }
  return nu;
}

namespace {

// Positive root v = e^{Gamma t} - 1 of
//   (a^2 - 1) v^2 + 2 (E a b - 1) v + (E^2 - 1) = 0,
// which is sigma2^2 sigma3^2 = 1/16 multiplied through by 16 e^{2 Gamma t}.
double separability_root(double lambda, double n_th, double n_s) {
  const double e = std::exp(-2.0 * lambda);
  const double a = 1.0 + 2.0 * n_th;
  const double b = 1.0 + 2.0 * n_s;
  const double c = 4.0 * n_th * (1.0 + n_th);  // a^2 - 1
  const double one_minus_e2 = -std::expm1(-4.0 * lambda);
  const double half_linear = 1.0 - e * a * b;
  const double disc = half_linear * half_linear + c * one_minus_e2;
  const double root = std::sqrt(disc);
  if (half_linear > 0.0) {
    if (c == 0.0) {
      return kInf;
    }
    return (half_linear + root) / c;
  }
  // Rationalised form: no cancellation and valid at c = 0.
  return one_minus_e2 / (root - half_linear);
}

double printed_threshold(double lambda, double n_th, double n_s) {
  if (n_th == 0.0) {
    throw DomainError(ErrorCode::infinite_threshold,
                      "as-printed threshold is undefined at n_th = 0");
  }
  const double a = 1.0 + 2.0 * n_th;
  const double denom = 4.0 * n_th * (1.0 + n_th);
  const double f = a * (a - std::exp(-2.0 * lambda) * (1.0 + 2.0 * n_s)) / denom;
  const double inner = f * f + n_s * (1.0 + n_s) / (n_th * (1.0 + n_th));
  return std::log(f + std::sqrt(inner) / a);
}

}  // namespace

double threshold_time_ts(const TwbSource& source, const BathSpec& bath, ThresholdForm form) {
  const double lambda = source.lambda();
  if (lambda == 0.0) {
    return 0.0;
  }
  if (form == ThresholdForm::as_printed) {
    return printed_threshold(lambda, bath.n_th(), bath.n_s());
  }
  if (bath.n_s() == 0.0) {
    return threshold_time_t0(source, bath.n_th());
  }
  const double v = separability_root(lambda, bath.n_th(), bath.n_s());
  return std::isinf(v) ? kInf : std::log1p(v);
}

double threshold_time_t0(const TwbSource& source, double n_th) {
  detail::require_non_negative(n_th, "n_th");
  const double num = -std::expm1(-2.0 * source.lambda());
  if (num == 0.0) {
    return 0.0;
  }
  if (n_th == 0.0) {
    return kInf;
  }
  return std::log1p(num / (2.0 * n_th));
}

double squeezing_penalty_G(const TwbSource& source, const BathSpec& bath, ThresholdForm form) {
  const double t0 = threshold_time_t0(source, bath.n_th());
  if (t0 == 0.0) {
    throw DomainError(ErrorCode::zero_threshold, "G needs lambda > 0 (t_0 = 0)");
  }
  if (std::isinf(t0)) {
    throw DomainError(ErrorCode::infinite_threshold, "G needs n_th > 0 (t_0 = infinity)");
  }
  const double ts = threshold_time_ts(source, bath, form);
  return (ts - t0) / t0;
}

}  // namespace gausstele
