#include "harvest/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace harvest::special {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(name) + ": non-finite argument");
  }
}

double dawson_series(double x) {
  // F(x) = sum_n (-2x^2)^n x / (1*3*...*(2n+1))
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 0; n < 200; ++n) {
    term *= -2.0 * x2 / (2.0 * n + 3.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kRybickiStep = 0.2;
constexpr int kRybickiTerms = 24;

std::array<double, kRybickiTerms> rybicki_coefficients() {
  std::array<double, kRybickiTerms> c{};
  for (int i = 0; i < kRybickiTerms; ++i) {
    const double t = (2.0 * i + 1.0) * kRybickiStep;
    c[i] = std::exp(-t * t);
  }
  return c;
}

// F(x) = lim_{h->0} (1/sqrt(pi)) sum_{n odd} exp(-(x - n h)^2) / n, with the
// sum recentred on the nearest even multiple of h so every exponential stays
// O(1). Truncation error ~ exp(-(pi / 2h)^2).
double dawson_rybicki(double x) {
  static const auto coeff = rybicki_coefficients();
  const double ax = std::abs(x);
  const int n0 = 2 * static_cast<int>(0.5 * ax / kRybickiStep + 0.5);
  const double xp = ax - n0 * kRybickiStep;
  double e1 = std::exp(2.0 * xp * kRybickiStep);
  const double e2 = e1 * e1;
  double d1 = n0 + 1.0;
  double d2 = d1 - 2.0;
  double sum = 0.0;
  for (int i = 0; i < kRybickiTerms; ++i, d1 += 2.0, d2 -= 2.0, e1 *= e2) {
    sum += coeff[i] * (e1 / d1 + 1.0 / (d2 * e1));
  }
  const double value = std::numbers::inv_sqrtpi * std::exp(-xp * xp) * sum;
  return std::copysign(value, x);
}

double dawson_asymptotic(double x) {
  // F(x) ~ 1/(2x) * sum_n (2n-1)!! / (2x^2)^n
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 100; ++n) {
    const double next = term * (2.0 * n - 1.0) * inv2x2;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return sum / (2.0 * x);
}

}  // namespace

double erfc_real(double x) {
  require_finite(x, "erfc_real");
  return std::erfc(x);
}

double dawson(double x) {
  require_finite(x, "dawson");
  const double ax = std::abs(x);
  if (ax < 1.0) return dawson_series(x);
  if (ax <= 6.0) return dawson_rybicki(x);
  return std::copysign(dawson_asymptotic(ax), x);
}

double erfi_scaled(double x) {
  require_finite(x, "erfi_scaled");
  if (x < 0.0) {
    throw std::domain_error("erfi_scaled: negative argument");
  }
  return 2.0 * std::numbers::inv_sqrtpi * dawson(x);
}

}  // namespace harvest::special
