#include "gausstele/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gausstele/error.hpp"

namespace gausstele::oracle {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;

constexpr unsigned kInnerMaxDepth = 4;
// The outer integrand carries the inner rounding noise, so the outer rule is
// held two orders above the inner tolerance and its recursion is capped.
constexpr unsigned kOuterMaxDepth = 3;
constexpr double kInnerRelTol = 1e-12;
constexpr double kOuterRelTol = 1e-10;

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Scale {
  double center;
  double sigma;
};

struct Interval {
  double lo;
  double hi;
};

Interval box_around(std::span<const Scale> scales) {
  double lo = scales.front().center;
  double hi = lo;
  double width = 0.0;
  for (const Scale& s : scales) {
    lo = std::min(lo, s.center);
    hi = std::max(hi, s.center);
    width = std::max(width, s.sigma);
  }
  return {lo - kBoxSigmas * width, hi + kBoxSigmas * width};
}

// Panel edges at fixed multiples of each scale so that the adaptive rule
// never starts on a panel much wider than the narrowest feature it contains.
std::vector<double> breakpoints(std::span<const Scale> scales, Interval box) {
  static constexpr double kMultiples[] = {0.0, 2.0, 4.5, 10.0};
  std::vector<double> pts{box.lo, box.hi};
  for (const Scale& s : scales) {
    for (double k : kMultiples) {
      for (double sign : {-1.0, 1.0}) {
        const double p = s.center + sign * k * s.sigma;
        if (p > box.lo && p < box.hi) {
          pts.push_back(p);
        }
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  double narrowest = box.hi - box.lo;
  for (const Scale& s : scales) {
    if (s.sigma > 0.0) narrowest = std::min(narrowest, s.sigma);
  }
  const double min_gap = 0.75 * narrowest;
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (out.empty() || p - out.back() > min_gap) {
      out.push_back(p);
    }
  }
  if (out.size() < 2) {
    out.push_back(box.hi);
  } else {
    out.back() = box.hi;
  }
  return out;
}

template <class F>
QuadratureResult integrate_panels(F&& f, const std::vector<double>& pts, double rel_tol) {
  CompensatedSum sum;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double e = 0.0;
    sum.add(Kronrod::integrate(f, pts[i], pts[i + 1], kInnerMaxDepth, rel_tol, &e));
    err += e;
  }
  return {sum.value(), err};
}

// Nested integral over x of [integral over y of f(x, y)]. `inner_scales(x)`
// supplies the y-features at that x.
template <class F, class G>
QuadratureResult integrate_nested(F&& f, const std::vector<double>& outer_pts, G&& inner_scales,
                                  Interval inner_box) {
  double inner_err_bound = 0.0;
  double panel_inner_err = 0.0;
  auto outer = [&](double x) {
    const std::vector<Scale> scales = inner_scales(x);
    const auto pts = breakpoints(scales, inner_box);
    const QuadratureResult r =
        integrate_panels([&](double y) { return f(x, y); }, pts, kInnerRelTol);
    panel_inner_err = std::max(panel_inner_err, r.error_estimate);
    return r.value;
  };
  CompensatedSum sum;
  double outer_err = 0.0;
  for (std::size_t i = 0; i + 1 < outer_pts.size(); ++i) {
    panel_inner_err = 0.0;
    double e = 0.0;
    sum.add(Kronrod::integrate(outer, outer_pts[i], outer_pts[i + 1], kOuterMaxDepth, kOuterRelTol, &e));
    outer_err += e;
    inner_err_bound += panel_inner_err * (outer_pts[i + 1] - outer_pts[i]);
  }
  return {sum.value(), outer_err + inner_err_bound};
}

void require_within(const QuadratureResult& r, double tolerance, const char* what) {
  if (!(r.error_estimate <= tolerance) || !std::isfinite(r.value)) {
    throw ConvergenceError(std::string(what) + " did not reach the requested tolerance", r.value,
                           r.error_estimate);
  }
}

Scale conditional_y(const GaussianWigner1M& g, double x) {
  return {g.mean_y() + g.cov_xy() / g.var_x() * (x - g.mean_x()),
          std::sqrt(g.determinant() / g.var_x())};
}

}  // namespace

QuadratureResult quad_overlap(const GaussianWigner1M& a, const GaussianWigner1M& b,
                              double tolerance) {
  const Scale ax{a.mean_x(), std::sqrt(a.var_x())};
  const Scale bx{b.mean_x(), std::sqrt(b.var_x())};
  const Scale ay{a.mean_y(), std::sqrt(a.var_y())};
  const Scale by{b.mean_y(), std::sqrt(b.var_y())};
  const Scale xs[] = {ax, bx};
  const Scale ys[] = {ay, by};
  const Interval xbox = box_around(xs);
  const Interval ybox = box_around(ys);

  QuadratureResult r = integrate_nested(
      [&](double x, double y) { return a.density(x, y) * b.density(x, y); },
      breakpoints(xs, xbox),
      [&](double x) { return std::vector<Scale>{conditional_y(a, x), conditional_y(b, x)}; }, ybox);
  r.value *= std::numbers::pi;
  r.error_estimate *= std::numbers::pi;
  require_within(r, tolerance, "overlap quadrature");
  return r;
}

namespace {

struct AxisMoments {
  double m0;
  double m1;
  double m2;
  double err;
};

// Raw moments of x under (K * W)(x) = integral dw K(w) W(x - w), computed as
// integral dw K(w) [integral dx x^k W(x - w)].
template <class K, class W>
AxisMoments axis_convolution_moments(K&& kernel, Scale kernel_scale, W&& input, Scale input_scale) {
  AxisMoments out{0.0, 0.0, 0.0, 0.0};
  double* slots[] = {&out.m0, &out.m1, &out.m2};
  for (int k = 0; k < 3; ++k) {
    auto integrand = [&](double w, double x) {
      return kernel(w) * std::pow(x, k) * input(x - w);
    };
    auto inner_scales = [&](double w) {
      return std::vector<Scale>{{input_scale.center + w, input_scale.sigma}};
    };
    QuadratureResult r;
    if (kernel_scale.sigma == 0.0) {
      // Point-mass kernel: the map is the identity on this axis.
      const Scale s[] = {input_scale};
      r = integrate_panels([&](double x) { return std::pow(x, k) * input(x); },
                           breakpoints(s, box_around(s)), kInnerRelTol);
    } else {
      const Scale ks[] = {kernel_scale};
      const Interval wbox = box_around(ks);
      const Scale shifted[] = {{input_scale.center + wbox.lo, input_scale.sigma},
                               {input_scale.center + wbox.hi, input_scale.sigma}};
      r = integrate_nested(integrand, breakpoints(ks, wbox), inner_scales, box_around(shifted));
    }
    *slots[k] = r.value;
    out.err += r.error_estimate;
  }
  return out;
}

ConvolutionMoments assemble(const AxisMoments& x, const AxisMoments& y, double tolerance) {
  ConvolutionMoments m{};
  m.norm = x.m0 * y.m0;
  m.mean_x = x.m1 / x.m0;
  m.mean_y = y.m1 / y.m0;
  m.var_x = x.m2 / x.m0 - m.mean_x * m.mean_x;
  m.var_y = y.m2 / y.m0 - m.mean_y * m.mean_y;
  m.cov_xy = 0.0;
  // Raw-moment errors propagate into the central moments with weight ~ (1 + |mean|)^2.
  const double wx = std::pow(1.0 + std::abs(m.mean_x), 2);
  const double wy = std::pow(1.0 + std::abs(m.mean_y), 2);
  m.error_estimate = x.err * wx + y.err * wy;
  require_within({m.var_x + m.var_y, m.error_estimate}, tolerance, "convolution quadrature");
  return m;
}

double gaussian_1d(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

}  // namespace

ConvolutionMoments quad_teleport_convolution(const SqueezedState& input, const EvolvedTwinBeam& twb,
                                             double tolerance) {
  const double s2 = twb.sigma2_sq();
  const double s3 = twb.sigma3_sq();
  // exp(-Re^2/(4 s3) - Im^2/(4 s2)) / (4 pi sqrt(s2 s3)), split into its two factors.
  auto kernel_re = [s3](double w) {
    return std::exp(-w * w / (4.0 * s3)) / (2.0 * std::sqrt(std::numbers::pi * s3));
  };
  auto kernel_im = [s2](double w) {
    return std::exp(-w * w / (4.0 * s2)) / (2.0 * std::sqrt(std::numbers::pi * s2));
  };
  // (2/pi) exp(-2 (x - a)^2 e^{2 zeta} - 2 (y - b)^2 e^{-2 zeta}), split likewise.
  const double z = input.zeta();
  auto input_x = [&](double x) {
    const double d = x - input.a();
    return std::sqrt(2.0 / std::numbers::pi) * std::exp(z) * std::exp(-2.0 * d * d * std::exp(2.0 * z));
  };
  auto input_y = [&](double y) {
    const double d = y - input.b();
    return std::sqrt(2.0 / std::numbers::pi) * std::exp(-z) *
           std::exp(-2.0 * d * d * std::exp(-2.0 * z));
  };
  const AxisMoments mx = axis_convolution_moments(kernel_re, {0.0, std::sqrt(2.0 * s3)}, input_x,
                                                  {input.a(), 0.5 * std::exp(-z)});
  const AxisMoments my = axis_convolution_moments(kernel_im, {0.0, std::sqrt(2.0 * s2)}, input_y,
                                                  {input.b(), 0.5 * std::exp(z)});
  return assemble(mx, my, tolerance);
}

ConvolutionMoments quad_kernel_convolution(const GaussianWigner1M& input,
                                           const TeleportKernel& kernel, double tolerance) {
  if (!input.axis_aligned() || kernel.cov() != 0.0) {
    throw DomainError(ErrorCode::not_positive_definite,
                      "kernel convolution oracle needs axis-aligned input and diagonal kernel");
  }
  const double kr = kernel.var_re();
  const double ki = kernel.var_im();
  auto kernel_re = [kr](double w) { return gaussian_1d(w, 0.0, kr); };
  auto kernel_im = [ki](double w) { return gaussian_1d(w, 0.0, ki); };
  auto input_x = [&](double x) { return gaussian_1d(x, input.mean_x(), input.var_x()); };
  auto input_y = [&](double y) { return gaussian_1d(y, input.mean_y(), input.var_y()); };
  const AxisMoments mx = axis_convolution_moments(kernel_re, {0.0, std::sqrt(kr)}, input_x,
                                                  {input.mean_x(), std::sqrt(input.var_x())});
  const AxisMoments my = axis_convolution_moments(kernel_im, {0.0, std::sqrt(ki)}, input_y,
                                                  {input.mean_y(), std::sqrt(input.var_y())});
  return assemble(mx, my, tolerance);
}

namespace {

// One quadrature axis of the heterodyne chain. The twin-beam Wigner function
// factorises into an x-part over (x1, x2) and a y-part over (y1, y2):
//   phi(u1, u2) = exp(-(u1 + u2)^2 / (4 s_sum) - (u1 - u2)^2 / (4 s_diff)) / (2 pi sqrt(s_sum s_diff)).
// Conditioning on outcome z, displacing mode 2 by z and averaging over z gives
//   F(out) = integral dz integral du1 g(u1) phi(sign * (u1 - z), out - z)
// with sign = +1 for x (x1 - x) and -1 for y (-y1 + y).
struct ChainAxis {
  double s_sum;
  double s_diff;
  double sign;
  double input_mean;
  double input_var;
};

QuadratureResult chain_axis_density(const ChainAxis& c, double out) {
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(c.s_sum * c.s_diff));
  auto phi = [&](double u1, double u2) {
    const double s = u1 + u2;
    const double d = u1 - u2;
    return norm * std::exp(-s * s / (4.0 * c.s_sum) - d * d / (4.0 * c.s_diff));
  };
  auto g = [&](double u) { return gaussian_1d(u, c.input_mean, c.input_var); };
  auto integrand = [&](double z, double u1) { return g(u1) * phi(c.sign * (u1 - z), out - z); };

  const double sig_in = std::sqrt(c.input_var);
  const double sig_sum = std::sqrt(2.0 * c.s_sum);
  const double sig_diff = std::sqrt(2.0 * c.s_diff);
  // For fixed z the phi factor is centred where u1 = z - sign(out - z) (sum term)
  // and u1 = z + sign(out - z) (difference term).
  auto inner_scales = [&](double z) {
    return std::vector<Scale>{{c.input_mean, sig_in},
                              {z - c.sign * (out - z), sig_sum},
                              {z + c.sign * (out - z), sig_diff}};
  };
  const double spread = sig_in + sig_sum + sig_diff;
  const Scale outer[] = {{0.5 * (c.input_mean + out), spread},
                         {c.input_mean, spread},
                         {out, spread}};
  const Interval zbox = box_around(outer);
  const Scale inner_extent[] = {{zbox.lo, spread}, {zbox.hi, spread}, {c.input_mean, spread}};
  // Twice the z-range covers both reflected centres of the inner integrand.
  Interval inner_box = box_around(inner_extent);
  inner_box.lo -= (zbox.hi - zbox.lo) + std::abs(out);
  inner_box.hi += (zbox.hi - zbox.lo) + std::abs(out);
  return integrate_nested(integrand, breakpoints(outer, zbox), inner_scales, inner_box);
}

}  // namespace

QuadratureResult heterodyne_chain_density(const SqueezedState& input, const EvolvedTwinBeam& twb,
                                          double x2, double y2, double tolerance) {
  const GaussianWigner1M w = input.wigner();
  const ChainAxis x_axis{twb.sigma1_sq(), twb.sigma3_sq(), 1.0, w.mean_x(), w.var_x()};
  const ChainAxis y_axis{twb.sigma2_sq(), twb.sigma4_sq(), -1.0, w.mean_y(), w.var_y()};
  const QuadratureResult fx = chain_axis_density(x_axis, x2);
  const QuadratureResult fy = chain_axis_density(y_axis, y2);
  const QuadratureResult r{fx.value * fy.value,
                           std::abs(fx.value) * fy.error_estimate + std::abs(fy.value) * fx.error_estimate};
  require_within(r, tolerance * std::max(1.0, std::abs(r.value)), "heterodyne chain quadrature");
  return r;
}

FokkerPlanck fokker_planck_coefficients(const BathParams& params) {
  // Gamma/2 (d_x x + d_y y) W + Gamma/2 [M/2 (d_xx - d_yy) + (N + 1/2)/2 (d_xx + d_yy)] W
  FokkerPlanck fp;
  fp.drift = 0.5;
  const double thermal = params.n + 0.5;
  fp.diffusion << 0.5 * (thermal + params.m), 0.0, 0.0, 0.5 * (thermal - params.m);
  return fp;
}

namespace {

template <int Dim>
Eigen::Matrix<double, Dim, Dim> rk4_lyapunov(const Eigen::Matrix<double, Dim, Dim>& initial,
                                             const Eigen::Matrix<double, Dim, Dim>& drift,
                                             const Eigen::Matrix<double, Dim, Dim>& diffusion,
                                             double gt, double max_step) {
  using Mat = Eigen::Matrix<double, Dim, Dim>;
  detail::require_non_negative(gt, "time_gt");
  if (!std::isfinite(gt) || !(max_step > 0.0)) {
    throw ConvergenceError("moment ODE needs a finite time span and positive step", gt, max_step);
  }
  auto rhs = [&](const Mat& v) -> Mat { return drift * v + v * drift.transpose() + diffusion; };
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(gt / max_step)));
  const double h = gt / static_cast<double>(steps);
  Mat v = initial;
  for (long i = 0; i < steps; ++i) {
    const Mat k1 = rhs(v);
    const Mat k2 = rhs(v + 0.5 * h * k1);
    const Mat k3 = rhs(v + 0.5 * h * k2);
    const Mat k4 = rhs(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!v.allFinite()) {
    throw ConvergenceError("moment ODE diverged", v.cwiseAbs().maxCoeff(), h);
  }
  return v;
}

}  // namespace

Eigen::Matrix4d ode_covariance_propagate(const Eigen::Matrix4d& initial, const BathParams& params,
                                         double gt, double max_step) {
  const FokkerPlanck fp = fokker_planck_coefficients(params);
  Eigen::Matrix4d diffusion = Eigen::Matrix4d::Zero();
  diffusion.block<2, 2>(0, 0) = fp.diffusion;
  diffusion.block<2, 2>(2, 2) = fp.diffusion;
  const Eigen::Matrix4d drift = -fp.drift * Eigen::Matrix4d::Identity();
  return rk4_lyapunov<4>(initial, drift, diffusion, gt, max_step);
}

Eigen::Matrix2d ode_covariance_propagate(const Eigen::Matrix2d& initial, const BathParams& params,
                                         double gt, double max_step) {
  const FokkerPlanck fp = fokker_planck_coefficients(params);
  const Eigen::Matrix2d drift = -fp.drift * Eigen::Matrix2d::Identity();
  return rk4_lyapunov<2>(initial, drift, fp.diffusion, gt, max_step);
}

GaussianWigner1M ode_single_mode_propagate(const GaussianWigner1M& initial,
                                           const BathParams& params, double gt, double max_step) {
  const Eigen::Matrix2d v = ode_covariance_propagate(initial.covariance(), params, gt, max_step);
  // dm/ds = -drift m, integrated with the same RK4 scheme.
  const double drift = fokker_planck_coefficients(params).drift;
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(gt / max_step)));
  const double h = gt / static_cast<double>(steps);
  const double k1 = -drift;
  const double k2 = -drift * (1.0 + 0.5 * h * k1);
  const double k3 = -drift * (1.0 + 0.5 * h * k2);
  const double k4 = -drift * (1.0 + h * k3);
  const double growth = 1.0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const double factor = std::pow(growth, static_cast<double>(steps));
  return {initial.mean_x() * factor, initial.mean_y() * factor, v(0, 0), v(1, 1),
          0.5 * (v(0, 1) + v(1, 0))};
}

const GaussHermiteRule& gauss_hermite_rule(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 0) {
      throw DomainError(ErrorCode::negative_parameter, "Gauss-Hermite rule needs n >= 1");
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (Eigen::Index k = 0; k < sub.size(); ++k) {
      sub(k) = std::sqrt(0.5 * static_cast<double>(k + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    auto rule = std::make_unique<GaussHermiteRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      rule->nodes[i] = solver.eigenvalues()(idx);
      const double v0 = solver.eigenvectors()(0, idx);
      rule->weights[i] = mu0 * v0 * v0;
    }
    slot = std::move(rule);
  }
  return *slot;
}

QuadratureResult ensemble_average(const AmplitudeEnsemble& ensemble,
                                  const std::function<double(double, double)>& f,
                                  std::size_t min_nodes, double tolerance, std::size_t max_nodes) {
  if (ensemble.delta_sq() == 0.0) {
    return {f(0.0, 0.0), 0.0};
  }
  const double scale = std::sqrt(2.0 * ensemble.delta_sq());
  auto evaluate = [&](std::size_t n) {
    const GaussHermiteRule& rule = gauss_hermite_rule(n);
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) {
      if (rule.weights[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (rule.weights[j] == 0.0) continue;
        sum.add(rule.weights[i] * rule.weights[j] * f(scale * rule.nodes[i], scale * rule.nodes[j]));
      }
    }
    return sum.value() / std::numbers::pi;
  };
  std::size_t n = std::max<std::size_t>(min_nodes, 1);
  double previous = evaluate(n);
  double diff = std::numeric_limits<double>::infinity();
  while (2 * n <= max_nodes) {
    n *= 2;
    const double current = evaluate(n);
    diff = std::abs(current - previous);
    previous = current;
    if (diff <= tolerance) {
      return {current, diff};
    }
  }
  throw ConvergenceError("Gauss-Hermite ensemble average did not converge", previous, diff);
}

namespace {

template <class Sign>
std::pair<double, double> expand_bracket(Sign&& sign_at, double lo, double hi, int max_expansions,
                                         const char* what) {
  if (!(hi > lo)) {
    throw DomainError(ErrorCode::no_sign_change, std::string(what) + ": empty bracket");
  }
  const int s_lo = sign_at(lo);
  for (int i = 0; i <= max_expansions; ++i) {
    if (sign_at(hi) != s_lo) {
      return {lo, hi};
    }
    hi = lo + 2.0 * (hi - lo);
  }
  throw ConvergenceError(std::string(what) + ": no sign change after bracket expansion", lo, hi);
}

}  // namespace

double find_root_bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_expansions) {
  if (f(lo) == 0.0) return lo;
  auto sign_at = [&](double x) { return f(x) > 0.0 ? 1 : (f(x) < 0.0 ? -1 : 0); };
  std::tie(lo, hi) = expand_bracket(sign_at, lo, hi, max_expansions, "find_root_bisect");
  const int s_lo = sign_at(lo);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0 ? 1 : -1) == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double find_flip_bisect(const std::function<bool(double)>& pred, double lo, double hi, double tol,
                        int max_expansions) {
  if (pred(lo)) {
    return lo;
  }
  auto sign_at = [&](double x) { return pred(x) ? 1 : 0; };
  std::tie(lo, hi) = expand_bracket(sign_at, lo, hi, max_expansions, "find_flip_bisect");
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace gausstele::oracle
