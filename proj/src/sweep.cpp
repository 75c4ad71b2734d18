#include "harvest/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "harvest/parallel.hpp"

namespace harvest::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

}  // namespace

std::string_view to_string(Spacing s) {
  switch (s) {
    case Spacing::Linear: return "linear";
    case Spacing::Log: return "log";
    case Spacing::ApproachLightspeed: return "approach-lightspeed";
  }
  return "linear";
}

Spacing parse_spacing(std::string_view s) {
  if (s == "linear") return Spacing::Linear;
  if (s == "log") return Spacing::Log;
  if (s == "approach-lightspeed") return Spacing::ApproachLightspeed;
  throw std::invalid_argument("unknown grid spacing '" + std::string(s) + "'");
}

void Grid::validate(std::string_view name) const {
  const std::string n(name);
  if (count < 1) throw std::invalid_argument(n + ": count must be >= 1");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw std::invalid_argument(n + ": bounds must be finite");
  }
  if (count > 1 && !(min < max)) {
    throw std::invalid_argument(n + ": min must be < max");
  }
  if (count == 1 && max < min) {
    throw std::invalid_argument(n + ": min must be <= max");
  }
  if (spacing == Spacing::Log && !(min > 0.0)) {
    throw std::invalid_argument(n + ": log spacing needs min > 0");
  }
  if (spacing == Spacing::ApproachLightspeed && !(max < 1.0)) {
    throw std::invalid_argument(n + ": approach-lightspeed spacing needs max < 1");
  }
}

std::vector<double> Grid::values() const {
  if (count == 1) return {min};
  std::vector<double> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    switch (spacing) {
      case Spacing::Linear:
        out[i] = min + t * (max - min);
        break;
      case Spacing::Log:
        out[i] = min * std::pow(max / min, t);
        break;
      case Spacing::ApproachLightspeed: {
        const double lo = 1.0 - min;
        const double hi = 1.0 - max;
        out[i] = 1.0 - lo * std::pow(hi / lo, t);
        break;
      }
    }
  }
  out.front() = min;
  out.back() = max;
  return out;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "d_over_sigma", "v", "sigma_omega", "p", "x_re", "x_im", "x_abs",
      "m", "negativity", "x_error_estimate", "spacelike"};
  return cols;
}

void SweepSpec::validate() const {
  d_over_sigma.validate("d_over_sigma");
  v.validate("v");
  sigma_omega.validate("sigma_omega");
  quad.validate();
  if (!(d_over_sigma.min > 0.0)) throw std::invalid_argument("d_over_sigma must be > 0");
  if (!(v.min >= 0.0) || !(v.max < 1.0)) throw std::invalid_argument("v must lie in [0, 1)");
  if (!(sigma_omega.min >= 0.0)) throw std::invalid_argument("sigma_omega must be >= 0");
  const auto& cols = sweep_columns();
  for (const auto& o : outputs) {
    if (std::find(cols.begin(), cols.end(), o) == cols.end()) {
      throw std::invalid_argument("unknown output column '" + o + "'");
    }
  }
}

SweepRow evaluate_point(double d_over_sigma, double v, double sigma_omega,
                        const quadrature::QuadratureSettings& quad) {
  SweepRow row;
  row.d_over_sigma = d_over_sigma;
  row.v = v;
  row.sigma_omega = sigma_omega;
  row.spacelike = model::is_spacelike(d_over_sigma, v, 1.0);
  try {
    const auto q = model::negativity({1.0, sigma_omega}, {d_over_sigma, v}, quad);
    row.p = q.p;
    row.x_re = q.x.real();
    row.x_im = q.x.imag();
    row.x_abs = std::abs(q.x);
    row.m = q.m;
    row.negativity = q.negativity;
    row.x_error_estimate = q.x_error_estimate;
  } catch (const std::exception& e) {
    row.p = row.x_re = row.x_im = row.x_abs = row.m = row.negativity =
        row.x_error_estimate = kNaN;
    row.status = csv_safe(std::string("error: ") + e.what());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  const auto ds = spec.d_over_sigma.values();
  const auto vs = spec.v.values();
  const auto ws = spec.sigma_omega.values();
  const size_t nv = vs.size();
  const size_t nw = ws.size();
  return parallel_map(ds.size() * nw * nv, workers, [&](size_t idx) {
    const size_t i = idx / (nw * nv);
    const size_t j = (idx / nv) % nw;
    const size_t k = idx % nv;
    return evaluate_point(ds[i], vs[k], ws[j], spec.quad);
  });
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& outputs) {
  const auto& cols = outputs.empty() ? sweep_columns() : outputs;
  for (const auto& c : cols) os << c << ',';
  os << "status\n";
  for (const auto& r : rows) {
    for (const auto& c : cols) {
      if (c == "d_over_sigma") os << format_double(r.d_over_sigma);
      else if (c == "v") os << format_double(r.v);
      else if (c == "sigma_omega") os << format_double(r.sigma_omega);
      else if (c == "p") os << format_double(r.p);
      else if (c == "x_re") os << format_double(r.x_re);
      else if (c == "x_im") os << format_double(r.x_im);
      else if (c == "x_abs") os << format_double(r.x_abs);
      else if (c == "m") os << format_double(r.m);
      else if (c == "negativity") os << format_double(r.negativity);
      else if (c == "x_error_estimate") os << format_double(r.x_error_estimate);
      else if (c == "spacelike") os << (r.spacelike ? "true" : "false");
      else throw std::invalid_argument("unknown output column '" + c + "'");
      os << ',';
    }
    os << r.status << '\n';
  }
}

std::vector<RegionRow> run_region_scan(const Grid& d_over_sigma,
                                       const Grid& sigma_omega,
                                       const quadrature::QuadratureSettings& quad,
                                       int workers) {
  d_over_sigma.validate("d_over_sigma");
  sigma_omega.validate("sigma_omega");
  quad.validate();
  if (!(d_over_sigma.min > 0.0)) throw std::invalid_argument("d_over_sigma must be > 0");
  if (!(sigma_omega.min >= 0.0)) throw std::invalid_argument("sigma_omega must be >= 0");
  const auto ds = d_over_sigma.values();
  const auto ws = sigma_omega.values();
  return parallel_map(ds.size() * ws.size(), workers, [&](size_t idx) {
    RegionRow row;
    row.d_over_sigma = ds[idx / ws.size()];
    row.sigma_omega = ws[idx % ws.size()];
    try {
      const auto r = model::classify_region({1.0, row.sigma_omega}, row.d_over_sigma, quad);
      row.label = r.label;
      row.n_at_rest = r.search.n_at_rest;
      row.multimodal = r.search.multimodal;
      if (r.search.peak) {
        row.v_star = r.search.peak->v_star;
        row.n_star = r.search.peak->n_star;
      }
    } catch (const std::exception& e) {
      row.n_at_rest = kNaN;
      row.status = csv_safe(std::string("error: ") + e.what());
    }
    return row;
  });
}

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows) {
  os << "d_over_sigma,sigma_omega,region,v_star,n_star,n_at_rest,multimodal,status\n";
  for (const auto& r : rows) {
    os << format_double(r.d_over_sigma) << ',' << format_double(r.sigma_omega) << ','
       << (r.ok() ? model::to_string(r.label) : "failed") << ','
       << format_optional(r.v_star) << ',' << format_optional(r.n_star) << ','
       << format_double(r.n_at_rest) << ',' << (r.multimodal ? "true" : "false")
       << ',' << r.status << '\n';
  }
}

}  // namespace harvest::sweep
