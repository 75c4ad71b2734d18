#include <cmath>
#include <numbers>

#include "doctest.h"
#include "harvest/model.hpp"

using namespace harvest::model;
using std::numbers::pi;

namespace {

const QuadratureSettings kQuad{};

double n_of(double d, double v, double w, double sigma = 1.0) {
  return negativity({sigma, w}, {d, v}, kQuad).negativity;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("transition probability") {
    CHECK(transition_probability({1.0, 0.0}) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(std::abs(transition_probability({1.0, 1.0}) - 0.0070883) < 1e-7);
    CHECK(transition_probability({1.0, 1.0}) == doctest::Approx(0.00708827223263642).epsilon(1e-12));
    const double p10 = transition_probability({1.0, 10.0});
    CHECK(p10 > 0.0);
    CHECK(p10 < 1e-40);
    CHECK(p10 == doctest::Approx(1.4585e-47).epsilon(1e-3));
    // Depends only on sigma * Omega.
    CHECK(transition_probability({2.0, 0.5}) == transition_probability({1.0, 1.0}));
  }

  TEST_CASE("transition probability decreases with the gap") {
    double prev = transition_probability({1.0, 0.0});
    for (double w = 0.05; w < 12.0; w += 0.05) {
      const double p = transition_probability({1.0, w});
      CHECK(p < prev);
      CHECK(p > 0.0);
      prev = p;
    }
  }

  TEST_CASE("correlation at rest matches the static closed form") {
    for (double d : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      for (double w : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double closed = static_correlation_magnitude({1.0, w}, d);
        const double fast = std::abs(correlation_x({1.0, w}, {d, 0.0}, kQuad).value);
        CAPTURE(d);
        CAPTURE(w);
        CHECK(std::abs(fast - closed) <= 1e-8 * closed);
      }
    }
    CHECK(static_correlation_magnitude({1.0, 0.0}, 1.0) == doctest::Approx(0.128956200848758).epsilon(1e-12));
  }

  TEST_CASE("negativity examples") {
    CHECK(std::abs(n_of(1.0, 0.0, 0.0) - 0.049378) < 1e-6);
    CHECK(n_of(1.0, 0.0, 0.0) == doctest::Approx(0.0493787293028101).epsilon(1e-9));
    for (int i = 0; i < 50; ++i) CHECK(n_of(2.0, 0.99 * i / 49.0, 0.0) == 0.0);
    CHECK(n_of(1.0, 0.999, 1.0) == 0.0);
    // Far apart only the Gaussian branch dies off; the erfi branch falls like
    // 1/d, so |X| stays near the static value instead of vanishing.
    const double far = std::abs(correlation_x({1.0, 1.0}, {20.0, 0.5}, kQuad).value);
    CHECK(far == doctest::Approx(1.47615861961e-4).epsilon(1e-9));
    CHECK(far == doctest::Approx(static_correlation_magnitude({1.0, 1.0}, 20.0)).epsilon(1e-2));
    CHECK(n_of(20.0, 0.5, 1.0) == 0.0);
  }

  TEST_CASE("negativity is max(|X| - P, 0)") {
    for (double d : {0.5, 3.0}) {
      for (double v : {0.0, 0.7}) {
        const auto q = negativity({1.0, 1.0}, {d, v}, kQuad);
        CHECK(q.m == doctest::Approx(std::abs(q.x) - q.p).epsilon(1e-15));
        CHECK(q.negativity == std::max(q.m, 0.0));
      }
    }
  }

  TEST_CASE("static negativity") {
    CHECK(std::abs(static_negativity({1.0, 0.0}, 1.0) - 0.049378) < 1e-6);
    CHECK(static_negativity({1.0, 0.0}, 60.0) == 0.0);
    CHECK(static_negativity({1.0, 0.5}, 8.0) == 0.0);
    // Strictly decreasing in d while positive.
    double prev = static_negativity({1.0, 0.0}, 0.1);
    for (double d = 0.2; d < 1.5; d += 0.1) {
      const double n = static_negativity({1.0, 0.0}, d);
      CHECK(n < prev);
      prev = n;
    }
  }

  TEST_CASE("zero-gap path agrees with the general one") {
    const auto a = zero_gap_x({1.0, 0.3}, 1.0, kQuad).value;
    const auto b = correlation_x({1.0, 0.0}, {1.0, 0.3}, kQuad).value;
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
    CHECK(std::abs(zero_gap_x({1.0, 0.0}, 1.0, kQuad).value) == doctest::Approx(0.128956200848758).epsilon(1e-9));
  }

  TEST_CASE("zero-gap negativity depends only on d / sigma") {
    for (double v : {0.0, 0.3, 0.5}) {
      CHECK(std::abs(n_of(1.0, v, 0.0, 1.0) - n_of(2.0, v, 0.0, 2.0)) < 1e-12);
      CHECK(std::abs(n_of(1.0, v, 0.0, 1.0) - n_of(3.0, v, 0.0, 3.0)) < 1e-12);
    }
  }

  TEST_CASE("spacelike distance") {
    CHECK(spacelike_min_distance(0.0, 1.0) == 6.0);
    CHECK(spacelike_min_distance(0.8, 1.0) == 10.0);
    CHECK(spacelike_min_distance(1.0 - 1e-12, 1.0) > 1e5);
    CHECK_THROWS_AS(spacelike_min_distance(1.0, 1.0), std::invalid_argument);
    CHECK(is_spacelike(7.0, 0.0, 1.0));
    CHECK_FALSE(is_spacelike(5.0, 0.0, 1.0));
    CHECK(is_spacelike(6.0, 0.0, 1.0));
  }

  TEST_CASE("gap threshold") {
    const auto w1 = omega_peak_threshold(1.0, 1.0);
    const auto w2 = omega_peak_threshold(2.0, 1.0);
    REQUIRE(w1);
    REQUIRE(w2);
    CHECK(std::abs(*w1 - 0.8215) < 1e-3);
    CHECK(std::abs(*w2 - 0.848) < 1e-3);
    CHECK(*omega_peak_threshold(2.0, 2.0) == doctest::Approx(*w1 / 2.0).epsilon(1e-14));
    CHECK_FALSE(omega_peak_threshold(4.0, 1.0));
    CHECK_FALSE(omega_peak_threshold(6.0, 1.0));
  }

  TEST_CASE("curvature at rest") {
    CHECK(second_derivative_at_rest({1.0, 1.0}, 1.0) > 0.0);
    CHECK(second_derivative_at_rest({1.0, 0.5}, 1.0) < 0.0);
    for (double d : {0.5, 1.0, 2.0, 3.0}) {
      const double wp = *omega_peak_threshold(d, 1.0);
      CAPTURE(d);
      CHECK(second_derivative_at_rest({1.0, wp * (1 - 1e-6)}, d) < 0.0);
      CHECK(second_derivative_at_rest({1.0, wp * (1 + 1e-6)}, d) > 0.0);
    }
  }

  TEST_CASE("curvature matches a quadrature finite difference") {
    const double h = 1e-2;  // h^2 = 1e-4
    const auto x2 = [](double v) {
      return std::norm(correlation_x({1.0, 1.2}, {1.5, v}, kQuad).value);
    };
    const double fd = (x2(h) - x2(0.0)) / (h * h);
    const double closed = second_derivative_at_rest({1.0, 1.2}, 1.5);
    CHECK(fd == doctest::Approx(closed).epsilon(1e-2));
  }

  TEST_CASE("velocity scan grid") {
    const auto& g = velocity_scan_grid();
    CHECK(g.size() == 64);
    CHECK(g.front() == 0.0);
    CHECK(1.0 - g.back() == doctest::Approx(1e-12).epsilon(1e-3));
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  }

  TEST_CASE("peak search") {
    const auto peaked = find_peak_velocity({1.0, 1.0}, 1.0, kQuad);
    REQUIRE(peaked.peak);
    CHECK(peaked.peak->v_star > 0.0);
    CHECK(peaked.peak->v_star < 1.0);
    CHECK(peaked.peak->n_star > peaked.n_at_rest);
    CHECK(peaked.n_at_rest > 0.0);
    // The refined maximiser beats its neighbours 1e-4 away.
    const double vs = peaked.peak->v_star;
    CHECK(peaked.peak->n_star >= n_of(1.0, vs + 1e-4, 1.0));
    CHECK(peaked.peak->n_star >= n_of(1.0, vs - 1e-4, 1.0));

    CHECK_FALSE(find_peak_velocity({1.0, 0.5}, 1.0, kQuad).peak);
    const auto dead = find_peak_velocity({1.0, 0.0}, 2.0, kQuad);
    CHECK_FALSE(dead.peak);
    CHECK(dead.n_at_rest == 0.0);
  }

  TEST_CASE("region labels") {
    CHECK(classify_region({1.0, 2.0}, 1.0, kQuad).label == RegionLabel::Peaked);
    CHECK(classify_region({1.0, 0.5}, 0.5, kQuad).label == RegionLabel::MonotoneDecreasing);
    CHECK(classify_region({1.0, 0.5}, 8.0, kQuad).label == RegionLabel::NoEntanglement);
    CHECK(to_string(RegionLabel::Peaked) == "peaked");
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(correlation_x({1.0, 0.0}, {0.0, 0.1}, kQuad), std::invalid_argument);
    CHECK_THROWS_AS(correlation_x({1.0, 0.0}, {1.0, 1.0}, kQuad), std::invalid_argument);
    CHECK_THROWS_AS(correlation_x({0.0, 0.0}, {1.0, 0.1}, kQuad), std::invalid_argument);
    CHECK_THROWS_AS(transition_probability({1.0, -1.0}), std::invalid_argument);
  }
}
