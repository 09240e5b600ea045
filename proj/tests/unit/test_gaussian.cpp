#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "gausstele/error.hpp"
#include "gausstele/gaussian.hpp"

using namespace gausstele;

TEST(GaussianWigner, VacuumAndThermalVariances) {
  const auto vac = GaussianWigner1M::vacuum();
  EXPECT_DOUBLE_EQ(vac.var_x(), 0.25);
  EXPECT_DOUBLE_EQ(vac.var_y(), 0.25);
  const auto th = GaussianWigner1M::thermal(0.5);
  EXPECT_DOUBLE_EQ(th.var_x(), 0.5);
  EXPECT_DOUBLE_EQ(th.var_y(), 0.5);
}

TEST(GaussianWigner, DensityPeakValue) {
  const GaussianWigner1M g(0.3, -0.1, 0.2, 0.5, 0.1);
  EXPECT_NEAR(g.density(0.3, -0.1), 1.0 / (2.0 * std::numbers::pi * std::sqrt(0.09)), 1e-14);
}

TEST(GaussianWigner, RejectsInvalidCovariance) {
  EXPECT_THROW(GaussianWigner1M(0, 0, -0.1, 0.25), DomainError);
  EXPECT_THROW(GaussianWigner1M(0, 0, 0.25, 0.0), DomainError);
  EXPECT_THROW(GaussianWigner1M(0, 0, 0.25, 0.25, 0.25), DomainError);
  EXPECT_THROW(GaussianWigner1M(std::nan(""), 0, 0.25, 0.25), DomainError);
}

TEST(SqueezedState, QuadratureVariances) {
  const auto w = SqueezedState(1.0, -2.0, 0.5).wigner();
  EXPECT_DOUBLE_EQ(w.mean_x(), 1.0);
  EXPECT_DOUBLE_EQ(w.mean_y(), -2.0);
  EXPECT_NEAR(w.var_x(), std::exp(-1.0) / 4.0, 1e-16);
  EXPECT_NEAR(w.var_y(), std::exp(1.0) / 4.0, 1e-15);
  EXPECT_NEAR(w.determinant(), 1.0 / 16.0, 1e-16);
}

TEST(TwbSource, VariancesAtLambdaOne) {
  const TwbVariances v = twb_wigner_variances(TwbSource(1.0));
  EXPECT_NEAR(v.plus, 1.847264024732663, 1e-14);
  EXPECT_NEAR(v.minus, 0.033833820809153, 1e-15);
  EXPECT_NEAR(TwbSource(1.0).x(), std::tanh(1.0), 1e-16);
}

TEST(TwbSource, VacuumAndNegativeLambda) {
  const TwbVariances v = twb_wigner_variances(TwbSource(0.0));
  EXPECT_DOUBLE_EQ(v.plus, 0.25);
  EXPECT_DOUBLE_EQ(v.minus, 0.25);
  EXPECT_THROW(TwbSource(-0.1), DomainError);
}

TEST(Covariance, TwinBeamOffDiagonal) {
  const TwbVariances v = twb_wigner_variances(TwbSource(1.0));
  const CovarianceMatrix4 cov = covariance_from_sigmas(v.plus, v.minus, v.minus, v.plus);
  EXPECT_NEAR(cov(0, 2), 0.906715101961755, 1e-14);
  EXPECT_NEAR(cov(1, 3), -0.906715101961755, 1e-14);
  EXPECT_NEAR(cov(0, 0), (v.plus + v.minus) / 2.0, 1e-15);
}

TEST(Covariance, SigmaRoundTrip) {
  const CovarianceMatrix4 cov = covariance_from_sigmas(0.9, 0.2, 0.4, 1.3);
  const auto s = sigmas_from_covariance(cov);
  EXPECT_NEAR(s[0], 0.9, 1e-15);
  EXPECT_NEAR(s[1], 0.2, 1e-15);
  EXPECT_NEAR(s[2], 0.4, 1e-15);
  EXPECT_NEAR(s[3], 1.3, 1e-15);
}

TEST(Covariance, RejectsAsymmetricOrIndefinite) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(CovarianceMatrix4{m}, DomainError);
  Eigen::Matrix4d n = Eigen::Matrix4d::Identity();
  n(0, 2) = n(2, 0) = 1.5;
  EXPECT_THROW(CovarianceMatrix4{n}, DomainError);
}

TEST(Overlap, IdenticalVacuumIsOne) {
  EXPECT_NEAR(gaussian_overlap(GaussianWigner1M::vacuum(), GaussianWigner1M::vacuum()), 1.0, 1e-15);
}

TEST(Overlap, DisplacedVacua) {
  const auto a = GaussianWigner1M::coherent(0.0, 0.0);
  const auto b = GaussianWigner1M::coherent(2.0, 0.0);
  EXPECT_NEAR(gaussian_overlap(a, b), std::exp(-4.0), 1e-15);
}

TEST(Overlap, SymmetricAndBoundedForPureStates) {
  const auto a = SqueezedState(0.3, 0.1, 0.7).wigner();
  const auto b = SqueezedState(-0.2, 0.4, -0.3).wigner();
  EXPECT_DOUBLE_EQ(gaussian_overlap(a, b), gaussian_overlap(b, a));
  EXPECT_LT(gaussian_overlap(a, b), 1.0);
  EXPECT_NEAR(gaussian_overlap(a, a), 1.0, 1e-14);
}

TEST(Overlap, MixedStatePurity) {
  // Tr[rho^2] of a thermal state is 1 / (1 + 2n).
  const auto th = GaussianWigner1M::thermal(0.7);
  EXPECT_NEAR(gaussian_overlap(th, th), 1.0 / 2.4, 1e-15);
}
