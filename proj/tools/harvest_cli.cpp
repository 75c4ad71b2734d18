#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "harvest/config.hpp"
#include "harvest/model.hpp"
#include "harvest/sweep.hpp"
#include "harvest/validation.hpp"
#include "json.hpp"

namespace {

using namespace harvest;
using nlohmann::json;

struct QuadFlags {
  std::optional<double> rel_tol, abs_tol, truncation_sigmas;
  std::optional<int> max_subdivisions;

  void add_to(CLI::App* app) {
    app->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance");
    app->add_option("--abs-tol", abs_tol, "Absolute quadrature tolerance (lambda^2)");
    app->add_option("--truncation-sigmas", truncation_sigmas,
                    "Integration half-window in envelope widths");
    app->add_option("--max-subdivisions", max_subdivisions, "Panel bisection budget");
  }

  void apply(quadrature::QuadratureSettings& q) const {
    if (rel_tol) q.rel_tol = *rel_tol;
    if (abs_tol) q.abs_tol = *abs_tol;
    if (truncation_sigmas) q.truncation_sigmas = *truncation_sigmas;
    if (max_subdivisions) q.max_subdivisions = *max_subdivisions;
  }
};

// JSON has no NaN; failed values become null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement harvesting between two moving detectors"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<int> workers;
  app.add_option("--workers", workers, "Concurrent grid points")
      ->check(CLI::PositiveNumber)
      ->option_text("INT");

  // point
  auto* point = app.add_subcommand("point", "Single evaluation, JSON to stdout");
  double p_d = 0.0, p_v = 0.0, p_omega = 0.0, p_sigma = 1.0;
  QuadFlags p_quad;
  point->add_option("--d", p_d, "Closest-approach separation")->required();
  point->add_option("--v", p_v, "Speed of each detector")->required();
  point->add_option("--omega", p_omega, "Energy gap")->required();
  point->add_option("--sigma", p_sigma, "Switching width")->capture_default_str();
  p_quad.add_to(point);

  // sweep and region share config handling
  std::string s_config, s_out;
  std::optional<std::string> s_d, s_v, s_omega;
  QuadFlags s_quad;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep to CSV");
  sweep_cmd->add_option("--config", s_config, "JSON config")->required();
  sweep_cmd->add_option("--out", s_out, "CSV output path (overrides config 'out')");
  sweep_cmd->add_option("--d", s_d, "d/sigma grid min:max:count[:spacing]");
  sweep_cmd->add_option("--v", s_v, "v grid min:max:count[:spacing]");
  sweep_cmd->add_option("--omega", s_omega, "sigma*Omega grid min:max:count[:spacing]");
  s_quad.add_to(sweep_cmd);

  auto* region_cmd = app.add_subcommand("region", "Region classification over (d, Omega) to CSV");
  region_cmd->add_option("--config", s_config, "JSON config")->required();
  region_cmd->add_option("--out", s_out, "CSV output path (overrides config 'out')");
  region_cmd->add_option("--d", s_d, "d/sigma grid min:max:count[:spacing]");
  region_cmd->add_option("--omega", s_omega, "sigma*Omega grid min:max:count[:spacing]");
  s_quad.add_to(region_cmd);

  // peak
  auto* peak_cmd = app.add_subcommand("peak", "Velocity maximising the negativity");
  double k_d = 0.0, k_omega = 0.0, k_sigma = 1.0;
  QuadFlags k_quad;
  peak_cmd->add_option("--d", k_d, "Closest-approach separation")->required();
  peak_cmd->add_option("--omega", k_omega, "Energy gap")->required();
  peak_cmd->add_option("--sigma", k_sigma, "Switching width")->capture_default_str();
  k_quad.add_to(peak_cmd);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Run the acceptance checks, JSON report");
  std::string v_grid = "full";
  std::optional<std::string> v_out;
  QuadFlags v_quad;
  validate_cmd->add_option("--grid", v_grid, "coarse or full")
      ->check(CLI::IsMember({"coarse", "full"}))
      ->capture_default_str();
  validate_cmd->add_option("--out", v_out, "Report path (default stdout)");
  v_quad.add_to(validate_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (point->parsed()) {
      quadrature::QuadratureSettings quad;
      p_quad.apply(quad);
      quad.validate();
      const model::DetectorSettings det{p_sigma, p_omega};
      const model::EncounterGeometry geom{p_d, p_v};
      const auto q = model::negativity(det, geom, quad);
      json j = {{"d", p_d},
                {"v", p_v},
                {"omega", p_omega},
                {"sigma", p_sigma},
                {"d_over_sigma", p_d / p_sigma},
                {"sigma_omega", p_sigma * p_omega},
                {"p", q.p},
                {"x_re", q.x.real()},
                {"x_im", q.x.imag()},
                {"x_abs", std::abs(q.x)},
                {"m", q.m},
                {"negativity", q.negativity},
                {"x_error_estimate", q.x_error_estimate},
                {"spacelike", model::is_spacelike(p_d, p_v, p_sigma)}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (sweep_cmd->parsed() || region_cmd->parsed()) {
      auto cfg = config::load_config(s_config);
      auto& spec = cfg.spec;
      if (s_d) spec.d_over_sigma = config::parse_grid_flag(*s_d);
      if (s_v) spec.v = config::parse_grid_flag(*s_v);
      if (s_omega) spec.sigma_omega = config::parse_grid_flag(*s_omega);
      s_quad.apply(spec.quad);
      if (!s_out.empty()) cfg.out = s_out;
      if (!cfg.out) throw std::invalid_argument("no output path: pass --out or set 'out'");
      const int n_workers = workers.value_or(cfg.workers.value_or(1));

      bool all_ok = true;
      size_t failed = 0;
      if (sweep_cmd->parsed()) {
        const auto rows = sweep::run_sweep(spec, n_workers);
        auto out = open_output(*cfg.out);
        sweep::write_sweep_csv(out, rows, spec.outputs);
        for (const auto& r : rows) failed += r.ok() ? 0 : 1;
      } else {
        const auto rows =
            sweep::run_region_scan(spec.d_over_sigma, spec.sigma_omega, spec.quad, n_workers);
        auto out = open_output(*cfg.out);
        sweep::write_region_csv(out, rows);
        for (const auto& r : rows) failed += r.ok() ? 0 : 1;
      }
      all_ok = failed == 0;
      if (!all_ok) std::cerr << failed << " grid point(s) failed; see the status column\n";
      return all_ok ? 0 : 1;
    }

    if (peak_cmd->parsed()) {
      quadrature::QuadratureSettings quad;
      k_quad.apply(quad);
      quad.validate();
      const model::DetectorSettings det{k_sigma, k_omega};
      const auto r = model::classify_region(det, k_d, quad);
      json j = {{"d_over_sigma", k_d / k_sigma},
                {"sigma_omega", k_sigma * k_omega},
                {"region", std::string(model::to_string(r.label))},
                {"v_star", r.search.peak ? json(r.search.peak->v_star) : json(nullptr)},
                {"n_star", r.search.peak ? json(r.search.peak->n_star) : json(nullptr)},
                {"n_at_rest", number_or_null(r.search.n_at_rest)},
                {"multimodal", r.search.multimodal}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (validate_cmd->parsed()) {
      validation::ValidationOptions opt;
      opt.grid = validation::parse_grid_size(v_grid);
      v_quad.apply(opt.quad);
      opt.oracle.quad = opt.quad;
      opt.workers = workers.value_or(1);
      const auto report = validation::run_validation(opt);
      if (v_out) {
        auto out = open_output(*v_out);
        validation::write_report_json(out, report);
      } else {
        validation::write_report_json(std::cout, report);
      }
      for (const auto& c : report.checks) {
        std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
      }
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
