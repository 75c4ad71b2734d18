#ifndef HARVEST_ORACLE_HPP
#define HARVEST_ORACLE_HPP

#include "harvest/model.hpp"
#include "harvest/quadrature.hpp"

// Momentum-space (plane-wave mode sum) evaluations of P and X. These share
// no formula with the fast paths in model.hpp beyond the special functions
// and the quadrature engine: P keeps the full (r, cos theta) double integral
// and X keeps the radial momentum integral, so agreement checks the analytic
// steps that produced the closed forms.
namespace harvest::oracle {

struct OracleSettings {
  quadrature::QuadratureSettings quad{};
  /// Radial momentum cutoff, in units of the radial envelope width (1/sigma
  /// for X, 1/(sigma (1 - v cos theta)) for P). For X this is only the split
  /// point between the adaptive head and the accelerated oscillatory tail.
  double k_truncation_sigmas = 8.0;

  void validate() const;
};

struct OracleValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// P = sigma^2 / (4 pi gamma^2) int_{-1}^{1} dc int_0^inf dr
///       r exp(-(r (1 - v c) + Omega)^2 sigma^2).
OracleValue p_momentum_oracle(const model::DetectorSettings& det, double v,
                              const OracleSettings& settings);

/// X from the radial momentum integral,
///
///   X = -(sigma sqrt(pi) / (4 pi^2 gamma^2)) int du' exp(-u'^2/4sigma^2)
///         exp(-i Omega u') / rho * int_0^inf dr exp(-r^2 sigma^2)
///         (1 + i erfi(r sigma)) sin(r rho),
///   rho = sqrt(u'^2 v^2 + d^2 / gamma^2),
///
/// integrated in u = gamma u' (so the outer variable matches
/// model::correlation_x). The u' form carries 1/gamma^2; the substitution
/// contributes a further 1/gamma from du' and the rho in the denominator
/// turns into sqrt(v^2 u^2 + d^2) / gamma, leaving the (1 - v^2) of the
/// single-integral form.
///
/// The radial integral of this form yields exp(-rho^2/4)(erfi(rho/2) + i);
/// the single-integral form in model.hpp carries (1 + i erfi) / i instead,
/// so the two agree up to X_oracle = -conj(X_fast). |X| and hence the
/// negativity are identical.
quadrature::IntegralResult x_momentum_oracle(const model::DetectorSettings& det,
                                             const model::EncounterGeometry& geom,
                                             const OracleSettings& settings);

/// The value model::correlation_x should produce, given an oracle result.
inline quadrature::Complex oracle_to_fast_convention(quadrature::Complex x) {
  return -std::conj(x);
}

}  // namespace harvest::oracle

#endif
