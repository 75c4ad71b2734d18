#include <sstream>

#include "doctest.h"
#include "harvest/validation.hpp"
#include "json.hpp"

using namespace harvest;

TEST_SUITE("validation") {
  TEST_CASE("coarse run passes and serialises") {
    validation::ValidationOptions opt;
    opt.grid = validation::GridSize::Coarse;
    const auto report = validation::run_validation(opt);
    for (const auto& c : report.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.passed);
    }
    CHECK(report.all_passed());
    std::ostringstream os;
    validation::write_report_json(os, report);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == report.checks.size());
  }

  TEST_CASE("loose tolerance keeps the tail checks green") {
    validation::ValidationOptions tight;
    tight.grid = validation::GridSize::Coarse;
    validation::ValidationOptions loose = tight;
    loose.quad.rel_tol = 1e-3;
    loose.oracle.quad.rel_tol = 1e-3;
    const auto a = validation::run_validation(tight);
    const auto b = validation::run_validation(loose);
    CHECK(b.find("x_oracle_equivalence")->max_deviation > a.find("x_oracle_equivalence")->max_deviation);
    CHECK(b.find("quadrature_tail_soundness")->passed);
    CHECK(b.find("oracle_tail_soundness")->passed);
  }

  TEST_CASE("a corrupted prefactor is caught by the oracle comparison") {
    validation::ValidationOptions opt;
    opt.grid = validation::GridSize::Coarse;
    opt.fast_x = [](const model::DetectorSettings& det, const model::EncounterGeometry& geom,
                    const model::QuadratureSettings& q) {
      auto r = model::correlation_x(det, geom, q);
      r.value *= 1.001;
      return r;
    };
    const auto report = validation::run_validation(opt);
    CHECK_FALSE(report.all_passed());
    REQUIRE(report.find("x_oracle_equivalence"));
    CHECK_FALSE(report.find("x_oracle_equivalence")->passed);
  }

  TEST_CASE("grid names") {
    CHECK(validation::parse_grid_size("full") == validation::GridSize::Full);
    CHECK_THROWS_AS(validation::parse_grid_size("medium"), std::invalid_argument);
  }
}
