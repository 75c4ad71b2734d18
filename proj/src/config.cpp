#include "harvest/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace harvest::config {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw std::invalid_argument(where + " must be a number");
  return j.get<double>();
}

sweep::Grid grid_from_json(const json& j, const std::string& name) {
  sweep::Grid g;
  if (j.is_number()) {
    g.min = g.max = j.get<double>();
    return g;
  }
  if (!j.is_object()) throw std::invalid_argument(name + " must be a number or an object");
  reject_unknown(j, {"min", "max", "count", "spacing"}, name);
  if (!j.contains("min") || !j.contains("max")) {
    throw std::invalid_argument(name + " needs min and max");
  }
  g.min = number(j["min"], name + ".min");
  g.max = number(j["max"], name + ".max");
  if (j.contains("count")) {
    if (!j["count"].is_number_integer()) throw std::invalid_argument(name + ".count must be an integer");
    g.count = j["count"].get<int>();
  } else {
    g.count = g.min == g.max ? 1 : 2;
  }
  if (j.contains("spacing")) {
    if (!j["spacing"].is_string()) throw std::invalid_argument(name + ".spacing must be a string");
    g.spacing = sweep::parse_spacing(j["spacing"].get<std::string>());
  }
  return g;
}

double parse_number(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(j, {"d_over_sigma", "v", "sigma_omega", "quadrature", "outputs", "out", "workers"},
                 "config");

  RunConfig cfg;
  auto& spec = cfg.spec;
  if (j.contains("d_over_sigma")) spec.d_over_sigma = grid_from_json(j["d_over_sigma"], "d_over_sigma");
  if (j.contains("v")) spec.v = grid_from_json(j["v"], "v");
  if (j.contains("sigma_omega")) spec.sigma_omega = grid_from_json(j["sigma_omega"], "sigma_omega");

  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    if (!q.is_object()) throw std::invalid_argument("quadrature must be an object");
    reject_unknown(q, {"rel_tol", "abs_tol", "truncation_sigmas", "max_subdivisions"}, "quadrature");
    if (q.contains("rel_tol")) spec.quad.rel_tol = number(q["rel_tol"], "quadrature.rel_tol");
    if (q.contains("abs_tol")) spec.quad.abs_tol = number(q["abs_tol"], "quadrature.abs_tol");
    if (q.contains("truncation_sigmas")) {
      spec.quad.truncation_sigmas = number(q["truncation_sigmas"], "quadrature.truncation_sigmas");
    }
    if (q.contains("max_subdivisions")) {
      if (!q["max_subdivisions"].is_number_integer()) {
        throw std::invalid_argument("quadrature.max_subdivisions must be an integer");
      }
      spec.quad.max_subdivisions = q["max_subdivisions"].get<int>();
    }
  }

  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) throw std::invalid_argument("outputs must be an array");
    for (const auto& o : j["outputs"]) {
      if (!o.is_string()) throw std::invalid_argument("outputs entries must be strings");
      spec.outputs.push_back(o.get<std::string>());
    }
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw std::invalid_argument("out must be a string");
    cfg.out = j["out"].get<std::string>();
  }
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 1) {
      throw std::invalid_argument("workers must be a positive integer");
    }
    cfg.workers = j["workers"].get<int>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

sweep::Grid parse_grid_flag(std::string_view text) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  sweep::Grid g;
  if (parts.size() == 1) {
    g.min = g.max = parse_number(parts[0]);
    return g;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("grid must be 'min:max:count[:spacing]', got '" +
                                std::string(text) + "'");
  }
  g.min = parse_number(parts[0]);
  g.max = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  if (count != static_cast<int>(count)) throw std::invalid_argument("grid count must be an integer");
  g.count = static_cast<int>(count);
  if (parts.size() == 4) g.spacing = sweep::parse_spacing(parts[3]);
  return g;
}

}  // namespace harvest::config
