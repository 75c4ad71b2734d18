#ifndef HARVEST_MODEL_HPP
#define HARVEST_MODEL_HPP

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "harvest/quadrature.hpp"

// Entanglement harvested by two identical Unruh-DeWitt detectors with
// Gaussian switching exp(-tau^2 / 4 sigma^2), moving with speeds +v and -v
// along x1 in their centre-of-mass frame and separated by d along x3 at
// closest approach (t = 0, coincident with both switching peaks). Massless
// scalar field in the 3+1 Minkowski vacuum, leading order in the coupling.
//
// Units: c = 1 and lambda = 1. Every probability, correlation and negativity
// is reported in units of lambda^2. The public API accepts dimensionful
// sigma, d and Omega; internally everything is rescaled to sigma = 1 so
// results depend only on d/sigma, sigma*Omega and v.
namespace harvest::model {

using quadrature::Complex;
using quadrature::QuadratureSettings;

struct DetectorSettings {
  double sigma = 1.0;  ///< switching width (time)
  double omega = 0.0;  ///< energy gap (inverse time); 0 is allowed

  void validate() const;
};

struct EncounterGeometry {
  double d = 1.0;  ///< closest-approach separation (length)
  double v = 0.0;  ///< speed of each detector in the centre-of-mass frame

  void validate() const;
  double gamma() const;
};

struct HarvestQuantities {
  double p = 0.0;
  Complex x{};
  double m = 0.0;           ///< |x| - p
  double negativity = 0.0;  ///< max(m, 0)
  double x_error_estimate = 0.0;
};

struct CorrelationResult {
  Complex value{};
  double error_estimate = 0.0;
};

enum class RegionLabel { NoEntanglement, MonotoneDecreasing, Peaked };

std::string_view to_string(RegionLabel label);

/// Excitation probability of either detector,
///   P = (1/4pi) [exp(-s^2 W^2) - sqrt(pi) s W erfc(s W)],  s = sigma, W = Omega.
/// Lorentz invariant, hence no dependence on the encounter geometry.
double transition_probability(const DetectorSettings& det);

/// Non-local correlation term X as a single integral over u,
///
///   X = (1 - v^2)/(8 pi i) int du exp(-A(u)) / sqrt(v^2 u^2 + d^2)
///         * exp(-i Omega u sqrt(1 - v^2)) * (1 + i erfi(x(u))),
///
///   A = (d^2 (1 - v^2) + u^2 (1 - v^4)) / 4,
///   x = sqrt(1 - v^2) sqrt(v^2 u^2 + d^2) / 2          (sigma = 1).
///
/// Since A - x^2 = (1 - v^2) u^2 / 4 exactly, the erfi branch is evaluated
/// as exp(-(1 - v^2) u^2 / 4) * erfi_scaled(x), which never overflows.
/// settings.abs_tol is applied to X itself, in units of lambda^2.
CorrelationResult correlation_x(const DetectorSettings& det,
                                const EncounterGeometry& geom,
                                const QuadratureSettings& settings);

/// P, X, M = |X| - P and N = max(M, 0).
HarvestQuantities negativity(const DetectorSettings& det,
                             const EncounterGeometry& geom,
                             const QuadratureSettings& settings);

/// |X| at v = 0 in closed form:
///   (sigma / 4 d sqrt(pi)) exp(-d^2/4sigma^2) exp(-sigma^2 Omega^2)
///     * sqrt(1 + erfi(d / 2 sigma)^2).
double static_correlation_magnitude(const DetectorSettings& det, double d);

/// N(v = 0) in closed form.
double static_negativity(const DetectorSettings& det, double d);

/// Omega -> 0 limit of X. Same value as correlation_x with Omega = 0 but a
/// separate integrand, kept as a cross-check.
CorrelationResult zero_gap_x(const EncounterGeometry& geom, double sigma,
                             const QuadratureSettings& settings);

/// 6 sigma / sqrt(1 - v^2): below this separation the +-3 sigma switching
/// windows of the two detectors can exchange light signals.
double spacelike_min_distance(double v, double sigma);

bool is_spacelike(double d, double v, double sigma);

/// Gap threshold above which d|X|^2/d(v^2) at v = 0 is positive. Empty when
/// the radicand is negative: no finite threshold at this d (the slope is then
/// positive for every gap).
std::optional<double> omega_peak_threshold(double d, double sigma);

/// Closed-form d|X|^2 / d(v^2) at v = 0 (units lambda^4).
double second_derivative_at_rest(const DetectorSettings& det, double d);

struct Peak {
  double v_star = 0.0;
  double n_star = 0.0;
};

struct PeakSearch {
  std::optional<Peak> peak;
  double n_at_rest = 0.0;
  /// M = |X| - P has more than one local maximum on the scan grid.
  bool multimodal = false;
};

/// Velocity grid used by the peak and region scans: dense-linear at low v,
/// log-uniform in 1 - v from 0.1 down to 1e-12.
const std::vector<double>& velocity_scan_grid();

/// Interior maximiser of N over v in (0, 1) with N(v*) > N(0) and N(v*) > 0,
/// located to |dv| <= 1e-4 by grid bracketing and golden-section refinement.
PeakSearch find_peak_velocity(const DetectorSettings& det, double d,
                              const QuadratureSettings& settings);

struct RegionResult {
  RegionLabel label = RegionLabel::NoEntanglement;
  PeakSearch search;
};

RegionResult classify_region(const DetectorSettings& det, double d,
                             const QuadratureSettings& settings);

}  // namespace harvest::model

#endif
