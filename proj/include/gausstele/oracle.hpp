#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gausstele/channel.hpp"
#include "gausstele/gaussian.hpp"
#include "gausstele/teleportation.hpp"
#include "gausstele/transmission.hpp"

// Independent numerical routes to every closed form in the library. Nothing
// here calls the closed forms it is meant to check: overlaps and convolutions
// are integrated pointwise, covariances are propagated through the
// Fokker-Planck moment equations, ensemble averages use Gauss-Hermite rules.

namespace gausstele::oracle {

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Integration box half-width in standard deviations.
inline constexpr double kBoxSigmas = 10.0;

/// pi * integral of W_A W_B by nested adaptive Gauss-Kronrod quadrature over a
/// box of +-10 of the largest standard deviation per axis. Throws
/// ConvergenceError if the error estimate exceeds `tolerance` (absolute).
QuadratureResult quad_overlap(const GaussianWigner1M& a, const GaussianWigner1M& b,
                              double tolerance = 1e-9);

struct ConvolutionMoments {
  double norm;  ///< zeroth moment; one for a trace-preserving kernel
  double mean_x;
  double mean_y;
  double var_x;
  double var_y;
  double cov_xy;  ///< zero by construction: both factors are axis aligned
  double error_estimate;
};

/// First and second moments of the teleported Wigner function obtained by
/// averaging the displaced input over the twin-beam noise kernel
/// exp(-Re(w)^2 / (4 sigma3^2) - Im(w)^2 / (4 sigma2^2)) / (4 pi sigma2 sigma3).
ConvolutionMoments quad_teleport_convolution(const SqueezedState& input, const EvolvedTwinBeam& twb,
                                             double tolerance = 1e-9);

/// Same moments for an arbitrary axis-aligned input and diagonal kernel.
ConvolutionMoments quad_kernel_convolution(const GaussianWigner1M& input,
                                           const TeleportKernel& kernel,
                                           double tolerance = 1e-9);

/// Teleported Wigner function at (x2, y2) integrated from the heterodyne
/// protocol itself: the joint Wigner function of input and evolved twin beam,
/// conditioned on outcome z, displaced by z and averaged over all outcomes.
QuadratureResult heterodyne_chain_density(const SqueezedState& input, const EvolvedTwinBeam& twb,
                                          double x2, double y2, double tolerance = 1e-9);

/// Drift rate and 2x2 diffusion matrix of the single-mode Fokker-Planck
/// equation in Gamma t units: dW/ds = div(drift * r W) + 1/2 div(D grad W).
struct FokkerPlanck {
  double drift;
  Eigen::Matrix2d diffusion;
};

FokkerPlanck fokker_planck_coefficients(const BathParams& params);

/// Integrates dV/ds = A V + V A^T + D with classical RK4 and step <= max_step.
Eigen::Matrix4d ode_covariance_propagate(const Eigen::Matrix4d& initial, const BathParams& params,
                                         double gt, double max_step = 5e-3);
Eigen::Matrix2d ode_covariance_propagate(const Eigen::Matrix2d& initial, const BathParams& params,
                                         double gt, double max_step = 5e-3);

/// Single-mode Gaussian propagated through the moment equations (mean and covariance).
GaussianWigner1M ode_single_mode_propagate(const GaussianWigner1M& initial,
                                           const BathParams& params, double gt,
                                           double max_step = 5e-3);

/// Nodes and weights for integral e^{-t^2} f(t) dt (physicists' convention).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch rule with n nodes; cached and safe to call concurrently.
const GaussHermiteRule& gauss_hermite_rule(std::size_t n);

/// Average of f(a, b) over the amplitude ensemble on a product Gauss-Hermite
/// grid. Starts at `min_nodes` per axis and doubles until two successive grids
/// agree within `tolerance` (absolute); the difference is the error estimate.
QuadratureResult ensemble_average(const AmplitudeEnsemble& ensemble,
                                  const std::function<double(double, double)>& f,
                                  std::size_t min_nodes = 64, double tolerance = 1e-12,
                                  std::size_t max_nodes = 1024);

/// Root of f on [lo, hi] to within `tol`. If f(lo) and f(hi) share a sign the
/// upper end is pushed out by doubling the bracket width, up to
/// `max_expansions` times, before giving up with ConvergenceError.
double find_root_bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_expansions = 60);

/// Point where `pred` switches from false to true on [lo, hi], to within `tol`.
double find_flip_bisect(const std::function<bool(double)>& pred, double lo, double hi, double tol,
                        int max_expansions = 60);

}  // namespace gausstele::oracle
