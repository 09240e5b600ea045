#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gausstele/channel.hpp"
#include "gausstele/gaussian.hpp"

namespace gausstele {

/// Amplitudes alpha = a + i b drawn from P(alpha) = exp(-|alpha|^2 / (2 Delta^2)) / (2 pi Delta^2),
/// i.e. a and b independent with variance Delta^2. Delta^2 = 0 is the point mass at 0.
class AmplitudeEnsemble {
 public:
  explicit AmplitudeEnsemble(double delta_sq);

  double delta_sq() const noexcept { return delta_sq_; }
  double density(double a, double b) const;

 private:
  double delta_sq_;
};

/// Which transcription of the direct-transmission formulas to use.
enum class FormulaVariant {
  /// Forms that agree with the phase-space overlap and ensemble quadrature.
  validated,
  /// Literal reference transcription: (1 + e^{-Gamma t'/2})^2 on the b term
  /// and a single power of (1 - e^{-Gamma t'/2}) on Delta^2. See FORMULA_NOTES.md.
  as_printed,
};

/// Direct transmission covers twice the length of each teleportation arm.
inline constexpr double kDirectLineFactor = 2.0;

struct DirectVariances {
  double a_sq;  ///< e^{-2 zeta}(1 + e^{-Gamma t'})/4 + D_+^2(t')
  double b_sq;  ///< e^{2 zeta}(1 + e^{-Gamma t'})/4 + D_-^2(t')
};

DirectVariances direct_variances(double zeta, const BathSpec& bath, double gt_direct);

/// Fidelity between the input squeezed state and its directly transmitted copy
/// after Gamma t' in the bath.
double direct_fidelity(const SqueezedState& state, const BathSpec& bath, double gt_direct,
                       FormulaVariant variant = FormulaVariant::validated);

/// direct_fidelity averaged over the amplitude ensemble at fixed zeta.
double avg_direct_fidelity(double zeta, const AmplitudeEnsemble& ensemble, const BathSpec& bath,
                           double gt_direct, FormulaVariant variant = FormulaVariant::validated);

struct AsymptoticG {
  double plus;
  double minus;
};

/// Long-time quantities g_{+-}, including the + Delta^2 term, evaluated with
/// the long-time optimal squeezing.
AsymptoticG asymptotic_g(const BathSpec& bath, const AmplitudeEnsemble& ensemble);

/// (1/2) / sqrt(g_+ g_-).
double asymptotic_direct_fidelity(const BathSpec& bath, const AmplitudeEnsemble& ensemble);

/// Ensemble width above which teleportation at Gamma t beats direct transmission
/// at Gamma t' = 2 Gamma t. zeta defaults to optimal_zeta at Gamma t. gt must be > 0.
double delta_threshold(const TwbSource& source, const BathSpec& bath, double gt,
                       std::optional<double> zeta = std::nullopt);

/// Zero-temperature, unsqueezed-bath specialisation of delta_threshold.
/// `validated` returns e^{-Gamma t}(e^{Gamma t} - 1 + e^{-2 lambda}) / (2 (1 - e^{-Gamma t})^2),
/// which is what delta_threshold gives at n_th = n_s = 0; `as_printed` has
/// e^{-Gamma t} in the denominator instead and is larger by e^{2 Gamma t}.
double delta_threshold_zero_noise(const TwbSource& source, double gt,
                                  FormulaVariant variant = FormulaVariant::validated);

/// Teleportation at Gamma t against direct transmission at 2 Gamma t.
struct LinkComparison {
  double gt;                        ///< teleportation time
  double gt_direct;                 ///< always kDirectLineFactor * gt
  double zeta;                      ///< input squeezing used on both links
  double f_tele;                    ///< avg_fidelity_tele(zeta) at gt
  std::vector<double> f_direct;     ///< avg_direct_fidelity per ensemble at gt_direct
  double delta_threshold_sq;        ///< NaN at gt = 0
};

LinkComparison compare_links(const TwbSource& source, const BathSpec& bath, double gt,
                             std::span<const AmplitudeEnsemble> ensembles,
                             std::optional<double> zeta = std::nullopt);

}  // namespace gausstele
