#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "harvest/special_functions.hpp"

using namespace harvest::special;

namespace {

// erfi by its Maclaurin series; every term is positive so there is no
// cancellation anywhere on [0, 5].
double erfi_taylor(double x) {
  double term = x;  // x^(2n+1) / n!
  double sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double add = term / (2 * n + 1);
    sum += add;
    if (add < 1e-18 * sum) break;
    term *= x * x / (n + 1);
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("erfc reference values") {
    CHECK(erfc_real(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(erfc_real(1.0) == doctest::Approx(0.1572992070).epsilon(1e-10));
    CHECK(erfc_real(-0.7) == doctest::Approx(2.0 - erfc_real(0.7)).epsilon(1e-15));
    for (double x = -3.0; x <= 3.0; x += 0.25) {
      CHECK(std::erf(x) + erfc_real(x) == doctest::Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("erfc rejects non-finite input") {
    CHECK_THROWS_AS(erfc_real(NAN), std::domain_error);
    CHECK_THROWS_AS(erfc_real(INFINITY), std::domain_error);
  }

  TEST_CASE("dawson reference values") {
    CHECK(dawson(0.0) == 0.0);
    CHECK(std::abs(dawson(10.0) - 0.0502538) < 1e-7);
    CHECK(dawson(10.0) == doctest::Approx(0.0502538471875985).epsilon(1e-13));
    CHECK(dawson(1.0) == doctest::Approx(0.5380795069127684).epsilon(1e-13));
    CHECK(dawson(1.3) + dawson(-1.3) == doctest::Approx(0.0).epsilon(1e-16));
    CHECK_THROWS_AS(dawson(NAN), std::domain_error);
  }

  TEST_CASE("dawson stays below its maximum") {
    for (double x = 0.0; x < 40.0; x += 0.01) CHECK(std::abs(dawson(x)) <= 0.5410444);
    CHECK(dawson(0.9241388730) == doctest::Approx(0.5410442246).epsilon(1e-9));
  }

  TEST_CASE("dawson satisfies F' = 1 - 2 x F across regime boundaries") {
    const double h = 1e-5;
    for (double x : {0.3, 0.99, 1.0, 1.01, 2.5, 5.99, 6.0, 6.01, 9.0, 25.0}) {
      const double fd = (dawson(x + h) - dawson(x - h)) / (2 * h);
      CAPTURE(x);
      CHECK(fd == doctest::Approx(1.0 - 2.0 * x * dawson(x)).epsilon(1e-7).scale(1.0));
    }
  }

  TEST_CASE("erfi_scaled reference values") {
    CHECK(erfi_scaled(0.0) == 0.0);
    CHECK(erfi_scaled(30.0) == doctest::Approx(0.0188167849).epsilon(1e-9));
    CHECK(std::abs(erfi_scaled(0.5) - std::exp(-0.25) * 0.6149521) < 1e-6);
    CHECK_THROWS_AS(erfi_scaled(-0.1), std::domain_error);
  }

  TEST_CASE("erfi_scaled times exp(x^2) matches the series erfi") {
    for (int i = 0; i < 100; ++i) {
      const double x = 5.0 * i / 99.0;
      const double expected = erfi_taylor(x);
      CAPTURE(x);
      if (expected == 0.0) {
        CHECK(erfi_scaled(x) == 0.0);
      } else {
        CHECK(std::abs(erfi_scaled(x) * std::exp(x * x) - expected) <= 1e-10 * expected);
      }
    }
  }

  TEST_CASE("erfi_scaled is finite far past the erfi overflow") {
    for (double x : {26.0, 27.0, 100.0, 1e4, 1e150}) {
      const double y = erfi_scaled(x);
      CHECK(std::isfinite(y));
      CHECK(y == doctest::Approx(1.0 / (std::sqrt(std::numbers::pi) * x)).epsilon(1e-3));
    }
  }
}
