#include "harvest/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "harvest/parallel.hpp"
#include "harvest/sweep.hpp"
#include "json.hpp"

namespace harvest::validation {

namespace {

using model::DetectorSettings;
using model::EncounterGeometry;
using std::numbers::pi;

CheckResult named(const std::string& name) {
  CheckResult r;
  r.name = name;
  return r;
}

struct Grids {
  std::vector<double> p_v, p_omega;
  std::vector<double> x_d, x_v, x_omega;
  std::vector<double> static_d, static_omega;
};

Grids grids_for(GridSize size) {
  if (size == GridSize::Full) {
    return {{0.0, 0.3, 0.6, 0.9, 0.99}, {0.0, 1.0, 4.0},
            {0.5, 1.0, 2.0, 4.0},       {0.0, 0.3, 0.6, 0.9}, {0.0, 0.5, 1.0, 2.0, 4.0},
            {0.5, 1.0, 2.0, 3.0, 4.0},  {0.0, 0.5, 1.0, 2.0, 4.0}};
  }
  return {{0.0, 0.9, 0.99}, {0.0, 4.0},
          {1.0, 4.0},       {0.0, 0.6, 0.9}, {0.0, 2.0},
          {0.5, 2.0, 4.0},  {0.0, 1.0, 4.0}};
}

struct GridPoint {
  double d, v, w;
};

std::vector<GridPoint> product(const std::vector<double>& ds, const std::vector<double>& vs,
                               const std::vector<double>& ws) {
  std::vector<GridPoint> pts;
  for (double d : ds)
    for (double v : vs)
      for (double w : ws) pts.push_back({d, v, w});
  return pts;
}

class Checker {
 public:
  explicit Checker(const ValidationOptions& opt) : opt_(opt), grids_(grids_for(opt.grid)) {}

  double abs_x(double sigma, double d, double v, double w) const {
    return std::abs(opt_.fast_x({sigma, w}, {d, v}, opt_.quad).value);
  }

  double n_fast(double sigma, double d, double v, double w) const {
    const DetectorSettings det{sigma, w};
    return std::max(abs_x(sigma, d, v, w) - model::transition_probability(det), 0.0);
  }

  CheckResult p_lorentz_invariance() const {
    auto r = named("p_lorentz_invariance");
    r.tolerance = 1e-6;
    std::vector<std::pair<double, double>> pts;
    for (double v : grids_.p_v)
      for (double w : grids_.p_omega) pts.push_back({v, w});
    const auto dev = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const DetectorSettings det{1.0, pts[i].second};
      return std::abs(oracle::p_momentum_oracle(det, pts[i].first, opt_.oracle).value -
                      model::transition_probability(det));
    });
    r.points = static_cast<int>(pts.size());
    r.max_deviation = *std::max_element(dev.begin(), dev.end());
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult p_zero_gap_limit() const {
    auto r = named("p_zero_gap_limit");
    r.tolerance = 1e-12;
    r.points = 1;
    r.max_deviation = std::abs(model::transition_probability({1.0, 0.0}) - 1.0 / (4.0 * pi));
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult p_unit_gap_value() const {
    auto r = named("p_unit_gap_value");
    r.tolerance = 1e-7;
    r.points = 1;
    r.max_deviation = std::abs(model::transition_probability({1.0, 1.0}) - 0.0070883);
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  // Deviation reported relative to max(|X|, 1e-5), which is the same as
  // |dX| <= max(1e-5 |X|, 1e-10) at a tolerance of 1e-5.
  CheckResult x_oracle_equivalence() const {
    auto r = named("x_oracle_equivalence");
    r.tolerance = 1e-5;
    const auto pts = product(grids_.x_d, grids_.x_v, grids_.x_omega);
    const auto dev = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const auto& p = pts[i];
      const DetectorSettings det{1.0, p.w};
      const EncounterGeometry geom{p.d, p.v};
      const auto fast = opt_.fast_x(det, geom, opt_.quad).value;
      const auto slow = oracle::oracle_to_fast_convention(
          oracle::x_momentum_oracle(det, geom, opt_.oracle).value);
      return std::abs(fast - slow) / std::max(std::abs(slow), 1e-5);
    });
    r.points = static_cast<int>(pts.size());
    const auto worst = std::max_element(dev.begin(), dev.end());
    r.max_deviation = *worst;
    const auto& wp = pts[static_cast<size_t>(worst - dev.begin())];
    std::ostringstream os;
    os << "worst at d/sigma=" << wp.d << " v=" << wp.v << " sigma*Omega=" << wp.w;
    r.detail = os.str();
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult static_reduction() const {
    auto r = named("static_reduction");
    r.tolerance = 1e-8;
    std::vector<std::pair<double, double>> pts;
    for (double d : grids_.static_d)
      for (double w : grids_.static_omega) pts.push_back({d, w});
    const auto dev = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const auto [d, w] = pts[i];
      const double closed = model::static_correlation_magnitude({1.0, w}, d);
      return std::abs(abs_x(1.0, d, 0.0, w) - closed) / closed;
    });
    r.points = static_cast<int>(pts.size());
    r.max_deviation = *std::max_element(dev.begin(), dev.end());
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult rest_negativity_value() const {
    auto r = named("rest_negativity_value");
    r.tolerance = 1e-6;
    r.points = 1;
    r.max_deviation = std::abs(n_fast(1.0, 1.0, 0.0, 0.0) - 0.049378);
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult zero_gap_extinction() const {
    auto r = named("zero_gap_extinction");
    r.tolerance = 0.0;
    constexpr int kCount = 50;
    const auto n = parallel_map(kCount, opt_.workers, [&](size_t i) {
      return n_fast(1.0, 2.0, 0.99 * static_cast<double>(i) / (kCount - 1), 0.0);
    });
    const double n_close = n_fast(1.0, 0.5, 0.0, 0.0);
    r.points = kCount + 1;
    r.max_deviation = *std::max_element(n.begin(), n.end());
    r.detail = "N(d/sigma=0.5, v=0, Omega=0) = " + sweep::format_double(n_close);
    r.passed = r.max_deviation <= r.tolerance && n_close > 0.0;
    return r;
  }

  CheckResult scale_invariance() const {
    auto r = named("scale_invariance");
    r.tolerance = 1e-9;
    for (double v : {0.0, 0.5}) {
      r.max_deviation = std::max(
          r.max_deviation, std::abs(n_fast(1.0, 1.0, v, 0.0) - n_fast(3.0, 3.0, v, 0.0)));
      r.points += 2;
    }
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  // The closed-form curvature must change sign at the closed-form threshold.
  CheckResult threshold_sign_flip() const {
    auto r = named("threshold_sign_flip");
    r.tolerance = 1e-8;
    for (double d : {0.5, 1.0, 2.0, 3.0}) {
      const auto wp = model::omega_peak_threshold(d, 1.0);
      if (!wp) throw std::runtime_error("no threshold at d/sigma=" + sweep::format_double(d));
      const auto f = [&](double w) { return model::second_derivative_at_rest({1.0, w}, d); };
      double lo = 0.5 * *wp;
      double hi = 1.5 * *wp;
      if (!(f(lo) < 0.0 && f(hi) > 0.0)) {
        throw std::runtime_error("curvature does not go from - to + around the threshold at d/sigma=" +
                                 sweep::format_double(d));
      }
      for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
      }
      r.max_deviation = std::max(r.max_deviation, std::abs(0.5 * (lo + hi) - *wp));
      ++r.points;
    }
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  // Bisects the sign of (|X(v=h)|^2 - |X(0)|^2) over the gap using the
  // quadrature path only.
  CheckResult threshold_finite_difference() const {
    auto r = named("threshold_finite_difference");
    r.tolerance = 1e-2;
    constexpr double h = 0.02;
    std::ostringstream os;
    const std::vector<std::pair<double, double>> targets = {{1.0, 0.8215}, {2.0, 0.848}};
    for (const auto& [d, expected] : targets) {
      const auto slope = [&](double w) {
        const double a = abs_x(1.0, d, h, w);
        const double b = abs_x(1.0, d, 0.0, w);
        return a * a - b * b;
      };
      double lo = 0.3;
      double hi = 1.5;
      if (!(slope(lo) < 0.0 && slope(hi) > 0.0)) {
        throw std::runtime_error("finite-difference slope has no sign change at d/sigma=" +
                                 sweep::format_double(d));
      }
      for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
      }
      const double root = 0.5 * (lo + hi);
      const double closed = model::omega_peak_threshold(d, 1.0).value_or(NAN);
      r.max_deviation = std::max({r.max_deviation, std::abs(root - expected),
                                  std::abs(root - closed)});
      os << "d/sigma=" << d << ": " << sweep::format_double(root) << "; ";
      ++r.points;
    }
    r.detail = os.str();
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult peak_phenomenology() const {
    auto r = named("peak_phenomenology");
    r.tolerance = 0.0;
    std::ostringstream os;
    bool ok = true;

    const auto peaked = model::find_peak_velocity({1.0, 1.0}, 1.0, opt_.quad);
    if (peaked.peak) {
      const auto& pk = *peaked.peak;
      os << "(1, 1): v*=" << sweep::format_double(pk.v_star) << " N*=" << sweep::format_double(pk.n_star)
         << " N0=" << sweep::format_double(peaked.n_at_rest) << "; ";
      ok = ok && pk.v_star > 0.0 && pk.v_star < 1.0 && pk.n_star > peaked.n_at_rest &&
           peaked.n_at_rest > 0.0;
    } else {
      os << "(1, 1): no peak; ";
      ok = false;
    }

    const auto flat = model::find_peak_velocity({1.0, 0.5}, 1.0, opt_.quad);
    ok = ok && !flat.peak && flat.n_at_rest > 0.0;
    const auto& grid = model::velocity_scan_grid();
    const auto n = parallel_map(grid.size(), opt_.workers,
                                [&](size_t i) { return n_fast(1.0, 1.0, grid[i], 0.5); });
    for (size_t i = 1; i < n.size(); ++i) {
      r.max_deviation = std::max(r.max_deviation, n[i] - n[i - 1]);
    }
    os << "(1, 0.5): " << (flat.peak ? "peak found" : "no peak")
       << ", largest rise " << sweep::format_double(r.max_deviation);
    r.points = static_cast<int>(grid.size()) + 2;
    r.detail = os.str();
    r.passed = ok && r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult entanglement_extinction() const {
    auto r = named("entanglement_extinction");
    r.tolerance = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (double d : grids_.x_d)
      for (double w : grids_.x_omega) pts.push_back({d, w});
    const auto& grid = model::velocity_scan_grid();
    // 1 = harvests at rest and never stops; 0 otherwise.
    const auto stuck = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const auto [d, w] = pts[i];
      if (!(n_fast(1.0, d, 0.0, w) > 0.0)) return 0;
      for (double v : grid) {
        if (n_fast(1.0, d, v, w) == 0.0) return 0;
      }
      return 1;
    });
    r.points = static_cast<int>(pts.size());
    std::ostringstream os;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (stuck[i]) {
        r.max_deviation += 1.0;
        os << "no extinction at d/sigma=" << pts[i].first << " sigma*Omega=" << pts[i].second << "; ";
      }
    }
    r.detail = os.str();
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult spacelike_criterion() const {
    auto r = named("spacelike_criterion");
    r.tolerance = 0.0;
    bool ok = model::spacelike_min_distance(0.8, 1.0) == 10.0;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dd(0.0, 40.0);
    std::uniform_real_distribution<double> vv(0.0, 0.999);
    constexpr int kPairs = 10000;
    for (int i = 0; i < kPairs; ++i) {
      const double d = dd(rng);
      const double v = vv(rng);
      const bool expected = d >= 6.0 / std::sqrt(1.0 - v * v);
      if (model::is_spacelike(d, v, 1.0) != expected) r.max_deviation += 1.0;
    }
    r.points = kPairs + 1;
    r.passed = ok && r.max_deviation <= r.tolerance;
    if (!ok) r.detail = "spacelike_min_distance(0.8) != 10";
    return r;
  }

  // Region scan at sigma*Omega = 4 beyond the light-crossing distance.
  CheckResult spacelike_harvesting() const {
    auto r = named("spacelike_harvesting");
    const sweep::Grid ds{6.0, 9.0, opt_.grid == GridSize::Full ? 13 : 7, sweep::Spacing::Linear};
    const sweep::Grid ws{4.0, 4.0, 1, sweep::Spacing::Linear};
    const auto rows = sweep::run_region_scan(ds, ws, opt_.quad, opt_.workers);
    r.points = static_cast<int>(rows.size());
    for (const auto& row : rows) {
      if (!row.ok()) continue;
      double hit = 0.0;
      // Strictly beyond the light-crossing distance, not on it.
      const auto beyond = [&](double v) {
        return row.d_over_sigma > model::spacelike_min_distance(v, 1.0);
      };
      if (row.n_at_rest > 0.0 && beyond(0.0)) {
        hit = row.n_at_rest;
      }
      if (row.v_star && *row.n_star > 0.0 && beyond(*row.v_star)) {
        hit = std::max(hit, *row.n_star);
      }
      if (hit > r.max_deviation) {
        r.max_deviation = hit;
        r.detail = "d/sigma=" + sweep::format_double(row.d_over_sigma) + " N=" + sweep::format_double(hit);
      }
    }
    r.passed = r.max_deviation > 0.0;
    if (!r.passed) r.detail = "no spacelike point with N > 0";
    return r;
  }

  // Widening the integration window must move X by no more than the
  // reported error estimates. Deviation is |dX| / (err_a + err_b).
  CheckResult quadrature_tail_soundness() const {
    auto r = named("quadrature_tail_soundness");
    r.tolerance = 1.0;
    const auto pts = product({0.5, 2.0, 4.0}, {0.0, 0.6, 0.99}, {0.0, 2.0});
    auto wide = opt_.quad;
    wide.truncation_sigmas = opt_.quad.truncation_sigmas + 4.0;
    const auto dev = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const DetectorSettings det{1.0, pts[i].w};
      const EncounterGeometry geom{pts[i].d, pts[i].v};
      const auto a = model::correlation_x(det, geom, opt_.quad);
      const auto b = model::correlation_x(det, geom, wide);
      return std::abs(a.value - b.value) / (a.error_estimate + b.error_estimate);
    });
    r.points = static_cast<int>(pts.size());
    r.max_deviation = *std::max_element(dev.begin(), dev.end());
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult oracle_tail_soundness() const {
    auto r = named("oracle_tail_soundness");
    r.tolerance = 1.0;
    auto wide = opt_.oracle;
    wide.k_truncation_sigmas = 2.0 * opt_.oracle.k_truncation_sigmas;
    const auto pts = product({1.0, 4.0}, {0.0, 0.6}, {0.0, 2.0});
    const auto dev = parallel_map(pts.size() + 2, opt_.workers, [&](size_t i) {
      if (i >= pts.size()) {
        const DetectorSettings det{1.0, i == pts.size() ? 0.0 : 4.0};
        const auto a = oracle::p_momentum_oracle(det, 0.9, opt_.oracle);
        const auto b = oracle::p_momentum_oracle(det, 0.9, wide);
        return std::abs(a.value - b.value) / (a.error_estimate + b.error_estimate);
      }
      const DetectorSettings det{1.0, pts[i].w};
      const EncounterGeometry geom{pts[i].d, pts[i].v};
      const auto a = oracle::x_momentum_oracle(det, geom, opt_.oracle);
      const auto b = oracle::x_momentum_oracle(det, geom, wide);
      return std::abs(a.value - b.value) / (a.error_estimate + b.error_estimate);
    });
    r.points = static_cast<int>(dev.size());
    r.max_deviation = *std::max_element(dev.begin(), dev.end());
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult zero_gap_cross_check() const {
    auto r = named("zero_gap_cross_check");
    r.tolerance = 1e-8;
    const auto pts = product({0.5, 1.0, 3.0}, {0.0, 0.5, 0.9}, {0.0});
    const auto dev = parallel_map(pts.size(), opt_.workers, [&](size_t i) {
      const EncounterGeometry geom{pts[i].d, pts[i].v};
      const auto a = opt_.fast_x({1.0, 0.0}, geom, opt_.quad).value;
      const auto b = model::zero_gap_x(geom, 1.0, opt_.quad).value;
      return std::abs(a - b) / std::max(std::abs(b), 1e-4);
    });
    r.points = static_cast<int>(pts.size());
    r.max_deviation = *std::max_element(dev.begin(), dev.end());
    r.passed = r.max_deviation <= r.tolerance;
    return r;
  }

  CheckResult sweep_determinism() const {
    auto r = named("sweep_determinism");
    sweep::SweepSpec spec;
    spec.d_over_sigma = {0.5, 4.0, 4, sweep::Spacing::Linear};
    spec.v = {0.0, 0.95, 4, sweep::Spacing::Linear};
    spec.sigma_omega = {0.0, 4.0, 3, sweep::Spacing::Linear};
    spec.quad = opt_.quad;
    std::ostringstream a, b;
    sweep::write_sweep_csv(a, sweep::run_sweep(spec, 1));
    sweep::write_sweep_csv(b, sweep::run_sweep(spec, std::max(opt_.workers, 3)));
    r.points = 48;
    r.max_deviation = a.str() == b.str() ? 0.0 : 1.0;
    r.passed = r.max_deviation == 0.0;
    return r;
  }

 private:
  const ValidationOptions& opt_;
  Grids grids_;
};

CheckResult timed(const std::string& name, const std::function<CheckResult()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r = named(name);
    r.passed = false;
    r.max_deviation = NAN;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

GridSize parse_grid_size(const std::string& s) {
  if (s == "coarse") return GridSize::Coarse;
  if (s == "full") return GridSize::Full;
  throw std::invalid_argument("grid must be 'coarse' or 'full', got '" + s + "'");
}

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Report run_validation(const ValidationOptions& options) {
  options.quad.validate();
  options.oracle.validate();
  const Checker c(options);
  Report report;
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"p_lorentz_invariance", [&] { return c.p_lorentz_invariance(); }},
      {"p_zero_gap_limit", [&] { return c.p_zero_gap_limit(); }},
      {"p_unit_gap_value", [&] { return c.p_unit_gap_value(); }},
      {"x_oracle_equivalence", [&] { return c.x_oracle_equivalence(); }},
      {"static_reduction", [&] { return c.static_reduction(); }},
      {"rest_negativity_value", [&] { return c.rest_negativity_value(); }},
      {"zero_gap_extinction", [&] { return c.zero_gap_extinction(); }},
      {"scale_invariance", [&] { return c.scale_invariance(); }},
      {"threshold_sign_flip", [&] { return c.threshold_sign_flip(); }},
      {"threshold_finite_difference", [&] { return c.threshold_finite_difference(); }},
      {"peak_phenomenology", [&] { return c.peak_phenomenology(); }},
      {"entanglement_extinction", [&] { return c.entanglement_extinction(); }},
      {"spacelike_criterion", [&] { return c.spacelike_criterion(); }},
      {"spacelike_harvesting", [&] { return c.spacelike_harvesting(); }},
      {"quadrature_tail_soundness", [&] { return c.quadrature_tail_soundness(); }},
      {"oracle_tail_soundness", [&] { return c.oracle_tail_soundness(); }},
      {"zero_gap_cross_check", [&] { return c.zero_gap_cross_check(); }},
      {"sweep_determinism", [&] { return c.sweep_determinism(); }},
  };
  for (const auto& [name, fn] : checks) report.checks.push_back(timed(name, fn));
  return report;
}

void write_report_json(std::ostream& os, const Report& report) {
  nlohmann::json j;
  j["passed"] = report.all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"max_deviation", c.max_deviation},
                           {"tolerance", c.tolerance},
                           {"points", c.points},
                           {"seconds", c.seconds},
                           {"detail", c.detail}});
  }
  os << j.dump(2) << '\n';
}

}  // namespace harvest::validation
