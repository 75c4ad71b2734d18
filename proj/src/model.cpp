#include "harvest/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "harvest/special_functions.hpp"

namespace harvest::model {

namespace {

using std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

// 1 - v^2 without cancellation near v = 1.
double one_minus_v2(double v) { return (1.0 - v) * (1.0 + v); }

// exp(-2 x^2) * (1 + erfi(x)^2), finite for every x.
double scaled_one_plus_erfi_sq(double x) {
  const double s = special::erfi_scaled(x);
  return std::exp(-2.0 * x * x) + s * s;
}

// exp(-W^2) - sqrt(pi) W erfc(W), W >= 0.
double probability_bracket(double w) {
  if (w < 6.0) {
    return std::exp(-w * w) - kSqrtPi * w * special::erfc_real(w);
  }
  // exp(-W^2) * (1 - sqrt(pi) W erfcx(W)) with the asymptotic series
  //   1 - sqrt(pi) W erfcx(W) ~ sum_{n>=1} (-1)^(n+1) (2n-1)!! / (2W^2)^n.
  const double inv = 1.0 / (2.0 * w * w);
  double term = inv;
  double sum = inv;
  for (int n = 2; n < 60; ++n) {
    const double next = term * (2.0 * n - 1.0) * inv;
    if (next >= term) break;
    term = next;
    sum += (n % 2 == 0 ? -term : term);
    if (term < 1e-17 * sum) break;
  }
  return std::exp(-w * w) * sum;
}

Complex rotate_by_minus_i(Complex z) { return {z.imag(), -z.real()}; }

// abs_tol is specified for X (units lambda^2); the integrator sees the bare
// integral, which is X / pref.
QuadratureSettings in_integral_units(QuadratureSettings s, double pref) {
  s.abs_tol /= pref;
  return s;
}

}  // namespace

void DetectorSettings::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be non-negative and finite");
  }
}

void EncounterGeometry::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument("d must be positive and finite");
  }
  if (!(v >= 0.0 && v < 1.0)) {
    throw std::invalid_argument("v must satisfy 0 <= v < 1");
  }
}

double EncounterGeometry::gamma() const { return 1.0 / std::sqrt(one_minus_v2(v)); }

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::NoEntanglement: return "no_entanglement";
    case RegionLabel::MonotoneDecreasing: return "monotone_decreasing";
    case RegionLabel::Peaked: return "peaked";
  }
  return "unknown";
}

double transition_probability(const DetectorSettings& det) {
  det.validate();
  return probability_bracket(det.sigma * det.omega) / (4.0 * pi);
}

CorrelationResult correlation_x(const DetectorSettings& det,
                                const EncounterGeometry& geom,
                                const QuadratureSettings& settings) {
  det.validate();
  geom.validate();
  const double d = geom.d / det.sigma;
  const double w = det.sigma * det.omega;
  const double v = geom.v;
  const double c = one_minus_v2(v);
  const double sc = std::sqrt(c);
  const double c4 = c * (1.0 + v * v);  // 1 - v^4
  const double freq = w * sc;

  const auto integrand = [=](double u) {
    const double s = std::hypot(v * u, d);
    const double gauss = std::exp(-(d * d * c + u * u * c4) / 4.0);
    const double scaled = std::exp(-c * u * u / 4.0) * special::erfi_scaled(sc * s / 2.0);
    const double phase = freq * u;
    return Complex(gauss, scaled) * Complex(std::cos(phase), -std::sin(phase)) / s;
  };

  quadrature::LineOptions opt;
  opt.max_frequency = freq;
  opt.feature_scale = v > 0.0 ? d / v : 0.0;
  // The erfi branch decays as exp(-(1 - v^2) u^2 / 4): the widest envelope.
  const double pref = c / (8.0 * pi);
  const auto r = quadrature::integrate_line(integrand, 2.0 / sc, in_integral_units(settings, pref), opt);
  return {pref * rotate_by_minus_i(r.value), pref * r.error_estimate};
}

HarvestQuantities negativity(const DetectorSettings& det,
                             const EncounterGeometry& geom,
                             const QuadratureSettings& settings) {
  HarvestQuantities q;
  q.p = transition_probability(det);
  const auto x = correlation_x(det, geom, settings);
  q.x = x.value;
  q.x_error_estimate = x.error_estimate;
  q.m = std::abs(q.x) - q.p;
  q.negativity = std::max(q.m, 0.0);
  return q;
}

double static_correlation_magnitude(const DetectorSettings& det, double d) {
  det.validate();
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  const double dd = d / det.sigma;
  const double w = det.sigma * det.omega;
  // exp(-dd^2/4) sqrt(1 + erfi(dd/2)^2) = sqrt(exp(-dd^2/2) + erfi_scaled(dd/2)^2)
  const double root = std::sqrt(scaled_one_plus_erfi_sq(dd / 2.0));
  return root * std::exp(-w * w) / (4.0 * dd * kSqrtPi);
}

double static_negativity(const DetectorSettings& det, double d) {
  return std::max(static_correlation_magnitude(det, d) - transition_probability(det), 0.0);
}

CorrelationResult zero_gap_x(const EncounterGeometry& geom, double sigma,
                             const QuadratureSettings& settings) {
  geom.validate();
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double d = geom.d / sigma;
  const double v = geom.v;
  const double c = one_minus_v2(v);
  const double sc = std::sqrt(c);

  // exp(-(1 - v^2)(d^2 + u^2 (1 + v^2)) / 4) (1 + i erfi(x)) / sqrt(v^2 u^2 + d^2)
  const auto integrand = [=](double u) {
    const double s2 = v * v * u * u + d * d;
    const double s = std::sqrt(s2);
    const double x = sc * s / 2.0;
    const double exponent = c * (d * d + u * u * (1.0 + v * v)) / 4.0;
    return Complex(std::exp(-exponent),
                   std::exp(x * x - exponent) * special::erfi_scaled(x)) / s;
  };

  quadrature::LineOptions opt;
  opt.feature_scale = v > 0.0 ? d / v : 0.0;
  const double pref = c / (8.0 * pi);
  const auto r = quadrature::integrate_line(integrand, 2.0 / sc, in_integral_units(settings, pref), opt);
  return {pref * rotate_by_minus_i(r.value), pref * r.error_estimate};
}

double spacelike_min_distance(double v, double sigma) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw std::invalid_argument("spacelike_min_distance: need 0 <= v < 1");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return 6.0 * sigma / std::sqrt(one_minus_v2(v));
}

bool is_spacelike(double d, double v, double sigma) {
  return d >= spacelike_min_distance(v, sigma);
}

std::optional<double> omega_peak_threshold(double d, double sigma) {
  if (!(d > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("omega_peak_threshold: need d, sigma > 0");
  }
  const double dd = d / sigma;
  // Numerator and denominator of the inner fraction multiplied by
  // exp(-dd^2/2); Q = exp(-dd^2/2)(1 + erfi^2), S = exp(-dd^2/4) erfi.
  const double x = dd / 2.0;
  const double s = special::erfi_scaled(x);
  const double q = std::exp(-2.0 * x * x) + s * s;
  const double denom = kSqrtPi * (1.0 + 2.0 / (dd * dd)) * q - 2.0 * s / dd;
  if (!(denom > 0.0)) return std::nullopt;
  const double radicand = 2.0 - dd * dd + 4.0 * kSqrtPi * q / denom;
  if (radicand < 0.0) return std::nullopt;
  return std::sqrt(radicand) / (2.0 * sigma);
}

double second_derivative_at_rest(const DetectorSettings& det, double d) {
  det.validate();
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  const double dd = d / det.sigma;
  const double w2 = det.sigma * det.omega * det.sigma * det.omega;
  const double q = scaled_one_plus_erfi_sq(dd / 2.0);  // exp(-dd^2/2)(1 + erfi^2)
  const double d2 = dd * dd;
  const double poly = d2 * d2 + 4.0 * d2 * (w2 - 1.0) + 8.0 * w2 - 4.0;
  const double bracket =
      pi * q * poly - 4.0 * dd * special::dawson(dd / 2.0) * (d2 + 4.0 * w2 - 2.0);
  return std::exp(-2.0 * w2) * bracket / (32.0 * pi * pi * d2 * d2);
}

const std::vector<double>& velocity_scan_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    constexpr int kLinear = 24;
    constexpr int kLog = 40;
    for (int i = 0; i < kLinear; ++i) g.push_back(0.9 * i / kLinear);
    for (int j = 0; j < kLog; ++j) {
      const double gap = 0.1 * std::pow(1e-11, static_cast<double>(j) / (kLog - 1));
      g.push_back(1.0 - gap);
    }
    return g;
  }();
  return grid;
}

namespace {

double margin(const DetectorSettings& det, double d, double v,
              const QuadratureSettings& settings) {
  return negativity(det, EncounterGeometry{d, v}, settings).m;
}

}  // namespace

PeakSearch find_peak_velocity(const DetectorSettings& det, double d,
                              const QuadratureSettings& settings) {
  det.validate();
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  const auto& grid = velocity_scan_grid();
  std::vector<double> m(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) m[i] = margin(det, d, grid[i], settings);

  PeakSearch out;
  out.n_at_rest = std::max(m[0], 0.0);

  int maxima = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    const bool left_ok = i == 0 || m[i] > m[i - 1];
    const bool right_ok = i + 1 == m.size() || m[i] >= m[i + 1];
    if (left_ok && right_ok && m[i] > 0.0) ++maxima;
  }
  out.multimodal = maxima > 1;

  const size_t k = static_cast<size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  if (k == 0) return out;

  // Golden-section maximisation of M on the bracketing grid cell pair.
  double a = grid[k - 1];
  double b = k + 1 < grid.size() ? grid[k + 1] : grid[k];
  const double tol = std::min(5e-5, 1e-3 * (1.0 - b));
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_v = grid[k];
  double best_m = m[k];
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = margin(det, d, x1, settings);
  double f2 = margin(det, d, x2, settings);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = margin(det, d, x2, settings);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = margin(det, d, x1, settings);
    }
  }
  for (const auto& [xv, fv] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (fv > best_m) {
      best_m = fv;
      best_v = xv;
    }
  }

  if (best_m > m[0] && best_m > 0.0) {
    out.peak = Peak{best_v, best_m};
  }
  return out;
}

RegionResult classify_region(const DetectorSettings& det, double d,
                             const QuadratureSettings& settings) {
  RegionResult out;
  out.search = find_peak_velocity(det, d, settings);
  if (out.search.peak) {
    out.label = RegionLabel::Peaked;
  } else if (out.search.n_at_rest > 0.0) {
    out.label = RegionLabel::MonotoneDecreasing;
  } else {
    out.label = RegionLabel::NoEntanglement;
  }
  return out;
}

}  // namespace harvest::model
