#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gausstele/channel.hpp"
#include "gausstele/error.hpp"
#include "gausstele/separability.hpp"
#include "gausstele/teleportation.hpp"

using namespace gausstele;

TEST(Kernel, TwinBeamCovariance) {
  const EvolvedTwinBeam twb(1.0, 0.2, 0.3, 1.0);
  const TeleportKernel k = TeleportKernel::from_twin_beam(twb);
  EXPECT_DOUBLE_EQ(k.var_re(), 0.6);
  EXPECT_DOUBLE_EQ(k.var_im(), 0.4);
  EXPECT_EQ(k.cov(), 0.0);
}

TEST(Kernel, ApplyAddsCovarianceKeepsMean) {
  Eigen::Matrix2d c;
  c << 0.3, 0.1, 0.1, 0.2;
  const TeleportKernel k = generalized_noise_kernel(c);
  const GaussianWigner1M in(0.5, -1.0, 0.25, 0.25);
  const GaussianWigner1M out = k.apply(in);
  EXPECT_DOUBLE_EQ(out.mean_x(), 0.5);
  EXPECT_DOUBLE_EQ(out.mean_y(), -1.0);
  EXPECT_DOUBLE_EQ(out.var_x(), 0.55);
  EXPECT_DOUBLE_EQ(out.var_y(), 0.45);
  EXPECT_DOUBLE_EQ(out.cov_xy(), 0.1);
}

TEST(Kernel, ZeroNoiseIsIdentityAndIndefiniteRejected) {
  const TeleportKernel k = generalized_noise_kernel(Eigen::Matrix2d::Zero());
  const GaussianWigner1M in(0.1, 0.2, 0.3, 0.4, 0.05);
  const GaussianWigner1M out = k.apply(in);
  EXPECT_DOUBLE_EQ(out.var_x(), in.var_x());
  EXPECT_DOUBLE_EQ(out.cov_xy(), in.cov_xy());
  Eigen::Matrix2d bad;
  bad << 0.1, 0.3, 0.3, 0.1;
  EXPECT_THROW(generalized_noise_kernel(bad), DomainError);
}

TEST(Fidelity, OptimalSqueezingExample) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(1.5), BathSpec(0.5, 0.3), 0.2);
  EXPECT_NEAR(twb.sigma2_sq(), 0.042003340112287, 1e-14);
  EXPECT_NEAR(twb.sigma3_sq(), 0.268408556952125, 1e-14);
  EXPECT_NEAR(optimal_zeta(twb), -0.463690286081685, 1e-13);
  EXPECT_NEAR(max_avg_fidelity(twb), 0.701893568251520, 1e-14);
  EXPECT_NEAR(avg_fidelity_tele(optimal_zeta(twb), twb), max_avg_fidelity(twb), 1e-15);
}

TEST(Fidelity, PerfectResourceLimit) {
  // Ideal twin beam before any noise: fidelity 1 / (1 + e^{-2 lambda}).
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(1.5), BathSpec(0.0, 0.0), 0.0);
  EXPECT_NEAR(max_avg_fidelity(twb), 1.0 / (1.0 + std::exp(-3.0)), 1e-15);
}

TEST(Fidelity, ClassicalLimitAtThreshold) {
  const TwbSource src(1.2);
  const BathSpec bath(0.4, 0.5);
  const EvolvedTwinBeam twb = evolve_twb(src, bath, threshold_time_ts(src, bath));
  EXPECT_NEAR(max_avg_fidelity(twb), kClassicalFidelityLimit, 1e-13);
}

TEST(Fidelity, AsymptoticValue) {
  EXPECT_DOUBLE_EQ(asymptotic_tele_fidelity(0.5), 1.0 / 3.0);
  const EvolvedTwinBeam twb =
      evolve_twb(TwbSource(1.5), BathSpec(0.5, 0.7), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(max_avg_fidelity(twb), 1.0 / 3.0, 1e-15);
}

TEST(Fidelity, CoherentOptimalWithoutBathSqueezing) {
  for (double gt : {0.0, 0.5, 2.0}) {
    EXPECT_EQ(optimal_zeta(evolve_twb(TwbSource(0.9), BathSpec(0.3, 0.0), gt)), 0.0);
  }
}

TEST(TeleportOutput, AddsKernelVariances) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(1.0), BathSpec(0.2, 0.1), 0.4);
  const SqueezedState in(0.7, -0.3, 0.2);
  const GaussianWigner1M out = teleport_output(in, twb);
  EXPECT_DOUBLE_EQ(out.mean_x(), 0.7);
  EXPECT_DOUBLE_EQ(out.mean_y(), -0.3);
  EXPECT_NEAR(out.var_x(), in.wigner().var_x() + 2.0 * twb.sigma3_sq(), 1e-15);
  EXPECT_NEAR(out.var_y(), in.wigner().var_y() + 2.0 * twb.sigma2_sq(), 1e-15);
  EXPECT_NEAR(gaussian_overlap(in.wigner(), out), avg_fidelity_tele(0.2, twb), 1e-15);
}
