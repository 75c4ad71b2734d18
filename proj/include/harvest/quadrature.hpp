#ifndef HARVEST_QUADRATURE_HPP
#define HARVEST_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace harvest::quadrature {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

struct QuadratureSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  /// Half-width of the integration window, in envelope widths.
  double truncation_sigmas = 10.0;
  /// Panel bisections allowed beyond the initial partition.
  int max_subdivisions = 4000;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

struct IntegralResult {
  Complex value{};
  double error_estimate = 0.0;
};

/// Hints describing the integrand's structure. Only used to seed the initial
/// partition; adaptivity does the rest.
struct LineOptions {
  /// Upper bound on the angular frequency of any oscillatory factor.
  double max_frequency = 0.0;
  /// Width of the narrowest feature centred at the origin (0 = none). The
  /// initial partition is geometrically graded down to this scale.
  double feature_scale = 0.0;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subdivision budget exhausted before the error target was met.
class NonConvergenceError : public QuadratureError {
 public:
  NonConvergenceError(double error_estimate, double tolerance, int subdivisions,
                      double worst_lo, double worst_hi);

  double error_estimate;
  double tolerance;
  int subdivisions;
  /// Panel with the largest remaining error.
  double worst_lo;
  double worst_hi;
};

/// The integrand returned NaN or infinity.
class NonFiniteIntegrandError : public QuadratureError {
 public:
  explicit NonFiniteIntegrandError(double abscissa);

  double abscissa;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integration over [lo, hi],
/// starting from `initial_panels` equal panels. Real and imaginary parts
/// share panels and a single refinement decision.
IntegralResult integrate_interval(const Integrand& f, double lo, double hi,
                                  const QuadratureSettings& settings,
                                  int initial_panels = 1);

/// Integral over the real line of an integrand bounded by a Gaussian
/// envelope exp(-(u/w)^2), w = envelope_width. The window is
/// [-T w, T w] with T = truncation_sigmas; the discarded tails are bounded
/// analytically from the integrand's magnitude at the window edges and
/// added to the error estimate.
IntegralResult integrate_line(const Integrand& f, double envelope_width,
                              const QuadratureSettings& settings,
                              const LineOptions& options = {});

/// As integrate_line over [0, T w].
IntegralResult integrate_halfline(const Integrand& f, double envelope_width,
                                  const QuadratureSettings& settings,
                                  const LineOptions& options = {});

/// Fourier sine transform int_0^inf g(r) sin(omega r) dr for an amplitude g
/// that decays only algebraically (e.g. ~1/r).
///
/// [0, R) is integrated adaptively, R being the first zero of sin(omega r)
/// at or beyond `cutoff`. The remainder is summed half-period by half-period
/// and the partial sums are accelerated with Wynn's epsilon algorithm.
IntegralResult integrate_sine_transform(const Integrand& amplitude,
                                        double omega, double cutoff,
                                        const QuadratureSettings& settings,
                                        int max_cycles = 400);

/// Upper bound on int_a^inf exp(-(u/w)^2) du / exp(-(a/w)^2), a > 0.
double gaussian_tail_factor(double a, double width);

}  // namespace harvest::quadrature

#endif
