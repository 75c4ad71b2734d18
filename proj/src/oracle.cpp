#include "harvest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "harvest/special_functions.hpp"

namespace harvest::oracle {

using quadrature::Complex;
using std::numbers::pi;

void OracleSettings::validate() const {
  quad.validate();
  if (!(k_truncation_sigmas >= 8.0)) {
    throw std::invalid_argument("k_truncation_sigmas must be >= 8");
  }
}

OracleValue p_momentum_oracle(const model::DetectorSettings& det, double v,
                              const OracleSettings& settings) {
  det.validate();
  settings.validate();
  if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("need 0 <= v < 1");
  const double w = det.sigma * det.omega;
  const double c = (1.0 - v) * (1.0 + v);  // 1 / gamma^2

  auto inner_settings = settings.quad;
  inner_settings.truncation_sigmas = settings.k_truncation_sigmas;
  double inner_err = 0.0;

  const auto over_cos = [&](double cos_theta) -> Complex {
    const double a = 1.0 - v * cos_theta;
    const auto radial = [=](double r) -> Complex {
      const double t = r * a + w;
      return r * std::exp(-t * t);
    };
    const auto res = quadrature::integrate_halfline(radial, 1.0 / a, inner_settings);
    inner_err = std::max(inner_err, res.error_estimate);
    return res.value;
  };

  const auto outer = quadrature::integrate_interval(over_cos, -1.0, 1.0, settings.quad, 8);
  const double pref = c / (4.0 * pi);
  return {pref * outer.value.real(),
          pref * (outer.error_estimate + 2.0 * inner_err)};
}

quadrature::IntegralResult x_momentum_oracle(const model::DetectorSettings& det,
                                             const model::EncounterGeometry& geom,
                                             const OracleSettings& settings) {
  det.validate();
  geom.validate();
  settings.validate();
  const double d = geom.d / det.sigma;
  const double w = det.sigma * det.omega;
  const double v = geom.v;
  const double gamma = geom.gamma();

  auto inner_settings = settings.quad;
  inner_settings.rel_tol = settings.quad.rel_tol / 10.0;
  inner_settings.abs_tol = settings.quad.abs_tol / 10.0;
  double inner_err = 0.0;

  // exp(-r^2) (1 + i erfi(r)) with the erfi branch kept bounded.
  const quadrature::Integrand radial_amplitude = [](double r) {
    return Complex(std::exp(-r * r), special::erfi_scaled(r));
  };

  const auto outer_integrand = [&](double u) {
    const double up = u / gamma;  // boosted-frame time
    const double rho = std::hypot(up * v, d / gamma);
    const auto radial = quadrature::integrate_sine_transform(
        radial_amplitude, rho, settings.k_truncation_sigmas, inner_settings);
    inner_err = std::max(inner_err, radial.error_estimate);
    const double phase = w * up;
    return std::exp(-up * up / 4.0) * Complex(std::cos(phase), -std::sin(phase)) *
           radial.value / rho;
  };

  quadrature::LineOptions opt;
  opt.max_frequency = w / gamma;
  opt.feature_scale = v > 0.0 ? d / v : 0.0;
  const auto outer =
      quadrature::integrate_line(outer_integrand, 2.0 * gamma, settings.quad, opt);

  // Prefactor of the u' form times du'/du = 1/gamma.
  const double pref = -std::sqrt(pi) / (4.0 * pi * pi * gamma * gamma * gamma);
  // int exp(-u^2/4gamma^2) / rho du <= 2 sqrt(pi) gamma^2 / d bounds the
  // propagated radial error.
  const double propagated = inner_err * 2.0 * std::sqrt(pi) * gamma * gamma / d;
  return {pref * outer.value, std::abs(pref) * (outer.error_estimate + propagated)};
}

}  // namespace harvest::oracle
