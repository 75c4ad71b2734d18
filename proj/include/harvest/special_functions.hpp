#ifndef HARVEST_SPECIAL_FUNCTIONS_HPP
#define HARVEST_SPECIAL_FUNCTIONS_HPP

namespace harvest::special {

/// Complementary error function. Throws std::domain_error on non-finite input.
double erfc_real(double x);

/// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
///
/// Three regimes, each accurate to ~1e-15 relative:
///   |x| < 1      Maclaurin series
///   1 <= |x| <= 6  Rybicki's exponentially convergent sum (h = 0.2)
///   |x| > 6      asymptotic expansion, truncated at its smallest term
double dawson(double x);

/// exp(-x^2) * erfi(x) = (2/sqrt(pi)) * F(x), for x >= 0.
///
/// erfi overflows near x ~ 26.6; this product stays bounded by ~0.6105 for
/// every x, so callers that need erfi(x) times a Gaussian should fold the
/// Gaussian into this form instead of evaluating erfi.
double erfi_scaled(double x);

}  // namespace harvest::special

#endif
