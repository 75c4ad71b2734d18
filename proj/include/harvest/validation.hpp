#ifndef HARVEST_VALIDATION_HPP
#define HARVEST_VALIDATION_HPP

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "harvest/model.hpp"
#include "harvest/oracle.hpp"

namespace harvest::validation {

enum class GridSize { Coarse, Full };

GridSize parse_grid_size(const std::string& s);

using CorrelationFn = std::function<model::CorrelationResult(
    const model::DetectorSettings&, const model::EncounterGeometry&,
    const model::QuadratureSettings&)>;

struct ValidationOptions {
  GridSize grid = GridSize::Full;
  model::QuadratureSettings quad{};
  oracle::OracleSettings oracle{};
  int workers = 1;
  /// Fast X under test. Replaceable so tests can feed in a broken one.
  CorrelationFn fast_x = model::correlation_x;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int points = 0;
  double seconds = 0.0;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Runs every check. A check that throws is reported as failed with the
/// message in `detail`; nothing escapes.
Report run_validation(const ValidationOptions& options);

void write_report_json(std::ostream& os, const Report& report);

}  // namespace harvest::validation

#endif
