#ifndef HARVEST_CONFIG_HPP
#define HARVEST_CONFIG_HPP

#include <optional>
#include <string>
#include <string_view>

#include "harvest/sweep.hpp"

// JSON run configuration shared by `sweep` and `region`:
//
//   {
//     "d_over_sigma": {"min": 0.5, "max": 4, "count": 20, "spacing": "linear"},
//     "v":            {"min": 0, "max": 0.95, "count": 20},
//     "sigma_omega":  2.0,
//     "quadrature":   {"rel_tol": 1e-9, "abs_tol": 1e-13,
//                      "truncation_sigmas": 10, "max_subdivisions": 4000},
//     "outputs":      ["d_over_sigma", "v", "negativity"],
//     "out":          "sweep.csv",
//     "workers":      4
//   }
//
// A bare number stands for a one-point grid. Every key is optional; unknown
// keys are rejected so typos do not silently fall back to defaults. `region`
// ignores "v" and "outputs".
namespace harvest::config {

struct RunConfig {
  sweep::SweepSpec spec;
  std::optional<std::string> out;
  std::optional<int> workers;
};

/// Throws std::invalid_argument on malformed JSON or schema violations.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// "min:max:count[:spacing]" or a single number, as accepted by the grid
/// override flags.
sweep::Grid parse_grid_flag(std::string_view text);

}  // namespace harvest::config

#endif
