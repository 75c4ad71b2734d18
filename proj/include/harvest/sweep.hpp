#ifndef HARVEST_SWEEP_HPP
#define HARVEST_SWEEP_HPP

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/model.hpp"

namespace harvest::sweep {

enum class Spacing {
  Linear,
  Log,
  /// Log-uniform in 1 - v; only meaningful for velocity grids.
  ApproachLightspeed,
};

std::string_view to_string(Spacing s);
Spacing parse_spacing(std::string_view s);

struct Grid {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  Spacing spacing = Spacing::Linear;

  /// min < max is required unless count == 1, in which case min == max is
  /// allowed and the single point is min.
  void validate(std::string_view name) const;
  std::vector<double> values() const;
};

struct SweepSpec {
  Grid d_over_sigma{1.0, 1.0, 1, Spacing::Linear};
  Grid v{0.0, 0.0, 1, Spacing::Linear};
  Grid sigma_omega{0.0, 0.0, 1, Spacing::Linear};
  quadrature::QuadratureSettings quad{};
  /// Requested CSV columns; empty means all of sweep_columns().
  std::vector<std::string> outputs;

  /// d grid > 0, v grid within [0, 1), omega grid >= 0, known column names.
  void validate() const;
};

struct SweepRow {
  double d_over_sigma = 0.0;
  double v = 0.0;
  double sigma_omega = 0.0;
  double p = 0.0;
  double x_re = 0.0;
  double x_im = 0.0;
  double x_abs = 0.0;
  double m = 0.0;
  double negativity = 0.0;
  double x_error_estimate = 0.0;
  bool spacelike = false;
  /// "ok", or the failure message for this point.
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Data columns in CSV order. A trailing `status` column is always written.
const std::vector<std::string>& sweep_columns();

/// Evaluates every grid tuple, rows in (d, omega, v) row-major order. A
/// failing point yields a row with NaN quantities and its error in `status`;
/// the sweep itself never aborts on a per-point failure.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 1);

SweepRow evaluate_point(double d_over_sigma, double v, double sigma_omega,
                        const quadrature::QuadratureSettings& quad);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& outputs = {});

struct RegionRow {
  double d_over_sigma = 0.0;
  double sigma_omega = 0.0;
  model::RegionLabel label = model::RegionLabel::NoEntanglement;
  std::optional<double> v_star;
  std::optional<double> n_star;
  double n_at_rest = 0.0;
  bool multimodal = false;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// classify_region over the (d, omega) product, rows in (d, omega) order.
std::vector<RegionRow> run_region_scan(const Grid& d_over_sigma,
                                       const Grid& sigma_omega,
                                       const quadrature::QuadratureSettings& quad,
                                       int workers = 1);

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows);

/// 17 significant digits, '.' separator, no locale dependence. Round-trips.
std::string format_double(double x);

}  // namespace harvest::sweep

#endif
