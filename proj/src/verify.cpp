#include "gausstele/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "gausstele/channel.hpp"
#include "gausstele/error.hpp"
#include "gausstele/oracle.hpp"
#include "gausstele/separability.hpp"
#include "gausstele/teleportation.hpp"
#include "gausstele/transmission.hpp"

namespace gausstele {

bool VerifyReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

namespace {

constexpr double kFaultScale = 1.0 + 1e-4;

// One random tuple; each check reads the fields it needs.
struct Sample {
  double lambda;
  double n_th;
  double n_s;
  double gt;
  double zeta;
  double a;
  double b;
  double delta_sq;
  double u;  // spare uniform draw in [0, 1)
  double v;
};

struct Outcome {
  double deviation;
  std::string detail;
};

std::string describe(const Sample& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "lambda=%.6g n_th=%.6g n_s=%.6g gt=%.6g zeta=%.6g a=%.6g b=%.6g delta_sq=%.6g",
                s.lambda, s.n_th, s.n_s, s.gt, s.zeta, s.a, s.b, s.delta_sq);
  return buf;
}

struct Ranges {
  double lambda_lo = 0.0, lambda_hi = 2.0;
  double nth_lo = 0.0, nth_hi = 1.5;
  double ns_lo = 0.0, ns_hi = 1.0;
  double gt_lo = 0.0, gt_hi = 3.0;
};

std::vector<Sample> draw_samples(std::size_t n, std::uint64_t seed, const Ranges& r) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<Sample> out(n);
  for (Sample& s : out) {
    s.lambda = in(r.lambda_lo, r.lambda_hi);
    s.n_th = in(r.nth_lo, r.nth_hi);
    s.n_s = in(r.ns_lo, r.ns_hi);
    s.gt = in(r.gt_lo, r.gt_hi);
    s.zeta = in(-1.5, 1.5);
    s.a = in(-2.0, 2.0);
    s.b = in(-2.0, 2.0);
    s.delta_sq = in(0.0, 2.0);
    s.u = unit(rng);
    s.v = unit(rng);
  }
  return out;
}

struct CheckSpec {
  std::string name;
  double tolerance;
  Ranges ranges;
  // Returns |closed - oracle|; `fault` scales the closed form.
  std::function<Outcome(const Sample&, double fault)> run;
  // Expensive checks run on grid_size / divisor tuples (at least one).
  std::size_t divisor = 1;
};

double max_abs_diff(std::initializer_list<std::pair<double, double>> pairs) {
  double d = 0.0;
  for (const auto& [x, y] : pairs) {
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

Outcome check_twb_vs_ode(const Sample& s, double fault) {
  const TwbSource src(s.lambda);
  const BathSpec bath(s.n_th, s.n_s);
  const EvolvedTwinBeam closed = evolve_twb(src, bath, s.gt);
  const Eigen::Matrix4d start = evolve_twb(src, bath, 0.0).covariance().matrix();
  const Eigen::Matrix4d ode =
      oracle::ode_covariance_propagate(start, bath_effective_params(bath), s.gt);
  const auto sig = sigmas_from_covariance(CovarianceMatrix4(ode));
  return {max_abs_diff({{fault * closed.sigma1_sq(), sig[0]},
                        {closed.sigma2_sq(), sig[1]},
                        {closed.sigma3_sq(), sig[2]},
                        {closed.sigma4_sq(), sig[3]}}),
          {}};
}

Outcome check_single_mode_vs_ode(const Sample& s, double fault) {
  const BathSpec bath(s.n_th, s.n_s);
  const SqueezedState state(s.a, s.b, s.zeta);
  const GaussianWigner1M closed = evolve_single_mode(state, bath, s.gt);
  const GaussianWigner1M ode =
      oracle::ode_single_mode_propagate(state.wigner(), bath_effective_params(bath), s.gt);
  return {max_abs_diff({{fault * closed.mean_x(), ode.mean_x()},
                        {closed.mean_y(), ode.mean_y()},
                        {closed.var_x(), ode.var_x()},
                        {closed.var_y(), ode.var_y()},
                        {closed.cov_xy(), ode.cov_xy()}}),
          {}};
}

// Random correlated Gaussian with variances in [0.05, 1.05] and |rho| < 0.8.
GaussianWigner1M random_gaussian(double mx, double my, double u, double v, double w) {
  const double vx = 0.05 + u;
  const double vy = 0.05 + v;
  const double rho = 0.8 * (2.0 * w - 1.0);
  return {mx, my, vx, vy, rho * std::sqrt(vx * vy)};
}

Outcome check_overlap(const Sample& s, double fault) {
  const GaussianWigner1M a = random_gaussian(s.a, s.b, s.u, s.v, s.n_s);
  const GaussianWigner1M b =
      random_gaussian(s.a + s.zeta, s.b - 0.5 * s.zeta, s.v * s.v, s.n_th / 1.5, 1.0 - s.u);
  const double closed = fault * gaussian_overlap(a, b);
  const double quad = oracle::quad_overlap(a, b).value;
  return {std::abs(closed - quad), {}};
}

Outcome check_teleport_fidelity(const Sample& s, double fault) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(s.lambda), BathSpec(s.n_th, s.n_s), s.gt);
  const SqueezedState input(s.a, s.b, s.zeta);
  const double closed = fault * avg_fidelity_tele(s.zeta, twb);
  const double quad = oracle::quad_overlap(input.wigner(), teleport_output(input, twb)).value;
  return {std::abs(closed - quad), {}};
}

Outcome check_convolution(const Sample& s, double fault) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(s.lambda), BathSpec(s.n_th, s.n_s), s.gt);
  const SqueezedState input(s.a, s.b, s.zeta);
  const GaussianWigner1M closed = teleport_output(input, twb);
  const oracle::ConvolutionMoments m = oracle::quad_teleport_convolution(input, twb);
  return {max_abs_diff({{1.0, m.norm},
                        {closed.mean_x(), m.mean_x},
                        {closed.mean_y(), m.mean_y},
                        {fault * closed.var_x(), m.var_x},
                        {closed.var_y(), m.var_y}}),
          {}};
}

Outcome check_chain(const Sample& s, double fault) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(s.lambda), BathSpec(s.n_th, s.n_s), s.gt);
  const SqueezedState input(s.a, s.b, s.zeta);
  const GaussianWigner1M closed = teleport_output(input, twb);
  // Probe within two standard deviations of the output mean.
  const double x2 = closed.mean_x() + 2.0 * (2.0 * s.u - 1.0) * std::sqrt(closed.var_x());
  const double y2 = closed.mean_y() + 2.0 * (2.0 * s.v - 1.0) * std::sqrt(closed.var_y());
  const double expected = fault * closed.density(x2, y2);
  const double chain = oracle::heterodyne_chain_density(input, twb, x2, y2).value;
  return {std::abs(expected - chain) / std::max(1.0, std::abs(expected)), {}};
}

Outcome check_direct_fidelity(const Sample& s, double fault) {
  const BathSpec bath(s.n_th, s.n_s);
  const SqueezedState state(s.a, s.b, s.zeta);
  const double gtd = kDirectLineFactor * s.gt;
  const double closed = fault * direct_fidelity(state, bath, gtd);
  const GaussianWigner1M received =
      oracle::ode_single_mode_propagate(state.wigner(), bath_effective_params(bath), gtd);
  const double quad = oracle::quad_overlap(state.wigner(), received).value;
  return {std::abs(closed - quad), {}};
}

Outcome check_avg_direct(const Sample& s, double fault) {
  const BathSpec bath(s.n_th, s.n_s);
  const AmplitudeEnsemble ens(s.delta_sq);
  const double gtd = kDirectLineFactor * s.gt;
  const double closed = fault * avg_direct_fidelity(s.zeta, ens, bath, gtd);
  const double avg = oracle::ensemble_average(ens, [&](double a, double b) {
                       return direct_fidelity(SqueezedState(a, b, s.zeta), bath, gtd);
                     }).value;
  return {std::abs(closed - avg), {}};
}

Outcome check_threshold(const Sample& s, double fault) {
  const TwbSource src(s.lambda);
  const BathSpec bath(s.n_th, s.n_s);
  const double closed = fault * threshold_time_ts(src, bath);
  // Separable once the smallest partially transposed symplectic eigenvalue reaches 1/4.
  auto excess = [&](double gt) {
    return min_symplectic_eigenvalue_pt(evolve_twb(src, bath, gt).covariance()) - 0.25;
  };
  const double root =
      oracle::find_root_bisect(excess, 0.0, threshold_time_t0(src, s.n_th) + 1.0, 1e-13);
  return {std::abs(closed - root), {}};
}

Outcome check_fidelity_crossing(const Sample& s, double fault) {
  const TwbSource src(s.lambda);
  const BathSpec bath(s.n_th, s.n_s);
  const double closed = fault * threshold_time_ts(src, bath);
  auto above = [&](double gt) {
    return max_avg_fidelity(evolve_twb(src, bath, gt)) - kClassicalFidelityLimit;
  };
  const double root =
      oracle::find_root_bisect(above, 0.0, threshold_time_t0(src, s.n_th) + 1.0, 1e-13);
  return {std::abs(closed - root), {}};
}

Outcome check_optimal_zeta(const Sample& s, double fault) {
  const EvolvedTwinBeam twb = evolve_twb(TwbSource(s.lambda), BathSpec(s.n_th, s.n_s), s.gt);
  const double closed = fault * optimal_zeta(twb);
  const auto [z, neg_f] = boost::math::tools::brent_find_minima(
      [&](double zeta) { return -avg_fidelity_tele(zeta, twb); }, -8.0, 8.0,
      std::numeric_limits<double>::digits);
  (void)neg_f;
  // Brent locates a minimum only to about sqrt(epsilon) in the argument.
  return {std::abs(closed - z), {}};
}

Outcome check_delta_threshold(const Sample& s, double fault) {
  const TwbSource src(s.lambda);
  const BathSpec bath(s.n_th, s.n_s);
  const EvolvedTwinBeam twb = evolve_twb(src, bath, s.gt);
  const double zeta = optimal_zeta(twb);
  const double closed = fault * delta_threshold(src, bath, s.gt, zeta);
  const double f_tele = avg_fidelity_tele(zeta, twb);
  auto gap = [&](double d2) {
    return avg_direct_fidelity(zeta, AmplitudeEnsemble(d2), bath, kDirectLineFactor * s.gt) -
           f_tele;
  };
  if (gap(0.0) <= 0.0) {
    // Teleportation already wins at Delta^2 = 0: the closed form must not be positive.
    return {closed > 0.0 ? closed : 0.0, "teleportation wins for every ensemble"};
  }
  const double root = oracle::find_root_bisect(gap, 0.0, 1.0, 1e-13);
  return {std::abs(closed - root) / std::max(1.0, std::abs(root)), {}};
}

Outcome check_asymptotic_direct(const Sample& s, double fault) {
  const BathSpec bath(s.n_th, s.n_s);
  const AmplitudeEnsemble ens(s.delta_sq);
  const double closed = fault * asymptotic_direct_fidelity(bath, ens);
  // Input squeezing that stays optimal for the fully decohered resource.
  const double zeta = optimal_zeta(
      evolve_twb(TwbSource(s.lambda), bath, std::numeric_limits<double>::infinity()));
  const double late = avg_direct_fidelity(zeta, ens, bath, 80.0);
  return {std::abs(closed - late), {}};
}

std::vector<CheckSpec> build_checks() {
  Ranges base;
  Ranges thermal = base;
  thermal.lambda_lo = 0.05;
  thermal.nth_lo = 0.05;
  Ranges positive_time = base;
  positive_time.gt_lo = 0.05;
  return {
      {"twb_variances_vs_moment_ode", 1e-8, base, check_twb_vs_ode},
      {"single_mode_vs_moment_ode", 1e-8, base, check_single_mode_vs_ode},
      {"gaussian_overlap_vs_quadrature", 1e-8, base, check_overlap},
      {"teleport_fidelity_vs_quadrature", 1e-8, base, check_teleport_fidelity},
      {"teleport_moments_vs_convolution", 1e-7, base, check_convolution},
      {"teleport_density_vs_heterodyne_chain", 1e-7, base, check_chain, 10},
      {"direct_fidelity_vs_quadrature", 1e-8, base, check_direct_fidelity},
      {"avg_direct_fidelity_vs_gauss_hermite", 1e-10, base, check_avg_direct},
      {"separability_time_vs_bisection", 1e-9, thermal, check_threshold},
      {"fidelity_crossing_vs_separability_time", 1e-9, thermal, check_fidelity_crossing},
      {"optimal_zeta_vs_brent", 1e-6, base, check_optimal_zeta},
      {"delta_threshold_vs_bisection", 1e-8, positive_time, check_delta_threshold},
      {"asymptotic_direct_vs_late_time", 1e-12, base, check_asymptotic_direct},
  };
}

CheckResult run_check(const CheckSpec& spec, std::size_t index, const VerifyOptions& options,
                      unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t count = std::max<std::size_t>(1, options.grid_size / spec.divisor);
  const std::vector<Sample> samples =
      draw_samples(count, options.seed + 7919 * (index + 1), spec.ranges);
  const bool faulty = options.inject_fault == "all" || options.inject_fault == spec.name;
  const double fault = faulty ? kFaultScale : 1.0;

  std::vector<Outcome> outcomes(samples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        outcomes[i] = spec.run(samples[i], fault);
        if (!std::isfinite(outcomes[i].deviation)) {
          outcomes[i] = {std::numeric_limits<double>::infinity(), "non-finite deviation"};
        }
      } catch (const std::exception& e) {
        outcomes[i] = {std::numeric_limits<double>::infinity(), e.what()};
      }
    }
  };
  const std::size_t n = samples.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }

  CheckResult result;
  result.name = spec.name;
  result.tolerance = spec.tolerance;
  result.samples = n;
  std::size_t worst = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (worst == n || outcomes[i].deviation > result.max_deviation) {
      result.max_deviation = outcomes[i].deviation;
      worst = i;
    }
  }
  if (worst < n) {
    result.worst_case = describe(samples[worst]);
    if (!outcomes[worst].detail.empty()) {
      result.worst_case += " (" + outcomes[worst].detail + ")";
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

std::vector<std::string> verification_check_names() {
  std::vector<std::string> names;
  for (const CheckSpec& c : build_checks()) names.push_back(c.name);
  return names;
}

VerifyReport run_verification(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CheckSpec> checks = build_checks();
  if (!options.inject_fault.empty() && options.inject_fault != "all" &&
      std::none_of(checks.begin(), checks.end(),
                   [&](const CheckSpec& c) { return c.name == options.inject_fault; })) {
    throw DomainError(ErrorCode::negative_parameter,
                      "unknown check for fault injection: " + options.inject_fault);
  }
  const unsigned threads =
      options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  VerifyReport report;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    report.checks.push_back(run_check(checks[i], i, options, threads));
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace gausstele
