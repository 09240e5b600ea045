#pragma once

#include "gausstele/channel.hpp"
#include "gausstele/gaussian.hpp"

namespace gausstele {

/// The two products whose bound 1/16 is equivalent to positivity of the
/// partial transpose for the evolved twin beam.
struct PptProducts {
  double x_pair;  ///< sigma1^2 * sigma4^2
  double y_pair;  ///< sigma2^2 * sigma3^2
};

inline constexpr double kSeparabilityBound = 1.0 / 16.0;

PptProducts ppt_products(const EvolvedTwinBeam& twb);

/// True iff both PPT products are >= 1/16. A product within a few ulps of the
/// bound counts as separable.
bool is_separable(const EvolvedTwinBeam& twb);

/// Smallest symplectic eigenvalue of the partially transposed covariance
/// (y2 -> -y2). The state is PPT iff this is >= 1/4. Works for any two-mode
/// covariance, not only the twin-beam block structure.
double min_symplectic_eigenvalue_pt(const CovarianceMatrix4& v);

enum class ThresholdForm {
  /// Exact root of sigma2^2 sigma3^2 = 1/16 in Gamma t.
  validated,
  /// Literal transcription of the reference closed form. Disagrees with the
  /// PPT root whenever n_s > 0; see FORMULA_NOTES.md.
  as_printed,
};

/// Gamma t_s after which the twin beam is separable; +infinity if it never is.
/// lambda = 0 returns 0.
double threshold_time_ts(const TwbSource& source, const BathSpec& bath,
                         ThresholdForm form = ThresholdForm::validated);

/// Purely thermal threshold Gamma t_0 = log(1 + (1 - e^{-2 lambda}) / (2 n_th)).
/// +infinity at n_th = 0.
double threshold_time_t0(const TwbSource& source, double n_th);

/// G = (t_s - t_0) / t_0. Requires lambda > 0 and n_th > 0 so that t_0 is
/// finite and non-zero; otherwise throws DomainError with code zero_threshold
/// or infinite_threshold.
double squeezing_penalty_G(const TwbSource& source, const BathSpec& bath,
                           ThresholdForm form = ThresholdForm::validated);

}  // namespace gausstele
