#include <cmath>
#include <numbers>

#include "doctest.h"
#include "harvest/oracle.hpp"

using namespace harvest;
using std::numbers::pi;

TEST_SUITE("oracle") {
  TEST_CASE("P from the momentum integral") {
    const oracle::OracleSettings s;
    CHECK(std::abs(oracle::p_momentum_oracle({1.0, 1.0}, 0.0, s).value - 0.0070883) < 1e-6);
    CHECK(std::abs(oracle::p_momentum_oracle({1.0, 1.0}, 0.9, s).value -
                   model::transition_probability({1.0, 1.0})) < 1e-6);
    CHECK(std::abs(oracle::p_momentum_oracle({1.0, 0.0}, 0.5, s).value - 1.0 / (4.0 * pi)) < 1e-6);
  }

  TEST_CASE("X from the momentum integral") {
    const oracle::OracleSettings s;
    const model::QuadratureSettings q;
    const auto rest = oracle::x_momentum_oracle({1.0, 0.0}, {1.0, 0.0}, s);
    CHECK(std::abs(std::abs(rest.value) - 0.128956) < 1e-5);

    for (const auto& [d, v, w] : {std::tuple{1.0, 0.5, 1.0}, std::tuple{3.0, 0.7, 2.0}}) {
      const auto slow = oracle::oracle_to_fast_convention(
          oracle::x_momentum_oracle({1.0, w}, {d, v}, s).value);
      const auto fast = model::correlation_x({1.0, w}, {d, v}, q).value;
      CAPTURE(d);
      CHECK(std::abs(slow - fast) <= 1e-5 * std::abs(fast));
    }
  }

  TEST_CASE("oracle carries the same sigma scaling") {
    const oracle::OracleSettings s;
    const auto a = oracle::x_momentum_oracle({1.0, 1.0}, {1.0, 0.4}, s).value;
    const auto b = oracle::x_momentum_oracle({2.0, 0.5}, {2.0, 0.4}, s).value;
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
  }

  TEST_CASE("doubling the radial cutoff stays within the error estimate") {
    oracle::OracleSettings s, wide;
    wide.k_truncation_sigmas = 16.0;
    const auto a = oracle::x_momentum_oracle({1.0, 1.0}, {2.0, 0.6}, s);
    const auto b = oracle::x_momentum_oracle({1.0, 1.0}, {2.0, 0.6}, wide);
    CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate);
    const auto pa = oracle::p_momentum_oracle({1.0, 4.0}, 0.99, s);
    const auto pb = oracle::p_momentum_oracle({1.0, 4.0}, 0.99, wide);
    CHECK(std::abs(pa.value - pb.value) <= pa.error_estimate + pb.error_estimate);
  }

  TEST_CASE("settings validation") {
    oracle::OracleSettings s;
    s.k_truncation_sigmas = 4.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
}
