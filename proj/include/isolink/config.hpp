#pragma once

// Scenario configuration: a single JSON document driving the command-line
// runs. Unknown keys are rejected outright, stochastic runs require a
// seed, and every knob is range-checked here.

#include <map>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "isolink/geometry.hpp"

namespace isolink {

struct ScenarioConfig {
  std::string zoo_name;                 // one of the five entries, when used
  int k_max = 8;
  double integrator_step = 1e-3;
  std::uint64_t seed = 42;
  bool seed_given = false;
  double tol = 1e-3;
  long horizon = 1000;
  long n_max = 200000;
  long orbit_steps = 48;
  int strata = 20;
  int batches = 10;
  std::string estimator = "orbit";      // orbit | radial | return-blocks | closed-form
  std::string point_a, point_b, point_z;  // named zoo points or "x,y"
  double rotation = 0.0;                // rigid-rotation parameter for annulus runs
  double disk_radius = 0.1;
  double disk_x = 0.0, disk_y = 0.5;
  int n_powers = 1;
  long pair_budget = 64;

  nlohmann::json raw;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw error(errc::config_error, "unknown key '" + it.key() + "' in " + where);
}

}  // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& j) {
  ScenarioConfig c;
  c.raw = j;
  if (!j.is_object()) throw error(errc::config_error, "config must be a JSON object");
  detail::reject_unknown(
      j,
      {"zoo", "k_max", "h", "seed", "tol", "horizon", "n_max", "orbit_steps", "strata",
       "batches", "estimator", "a", "b", "z", "rotation", "disk_radius", "disk_x", "disk_y",
       "n_powers", "pair_budget"},
      "config");
  auto get_num = [&](const char* key, double lo, double hi, double def) {
    if (!j.contains(key)) return def;
    double v = j.at(key).get<double>();
    if (v < lo || v > hi)
      throw error(errc::config_error, std::string(key) + " out of range");
    return v;
  };
  if (j.contains("zoo")) c.zoo_name = j.at("zoo").get<std::string>();
  c.k_max = static_cast<int>(get_num("k_max", 1, 64, 8));
  c.integrator_step = get_num("h", 1e-6, 0.1, 1e-3);
  if (j.contains("seed")) {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.seed_given = true;
  }
  c.tol = get_num("tol", 1e-12, 1.0, 1e-3);
  c.horizon = static_cast<long>(get_num("horizon", 1, 1e9, 1000));
  c.n_max = static_cast<long>(get_num("n_max", 1, 1e9, 200000));
  c.orbit_steps = static_cast<long>(get_num("orbit_steps", 1, 100000, 48));
  c.strata = static_cast<int>(get_num("strata", 1, 4096, 20));
  c.batches = static_cast<int>(get_num("batches", 2, 64, 10));
  if (j.contains("estimator")) {
    c.estimator = j.at("estimator").get<std::string>();
    if (c.estimator != "orbit" && c.estimator != "radial" && c.estimator != "return-blocks" &&
        c.estimator != "closed-form")
      throw error(errc::config_error, "estimator must be orbit|radial|return-blocks|closed-form");
  }
  if (j.contains("a")) c.point_a = j.at("a").get<std::string>();
  if (j.contains("b")) c.point_b = j.at("b").get<std::string>();
  if (j.contains("z")) c.point_z = j.at("z").get<std::string>();
  c.rotation = get_num("rotation", -100, 100, 0.0);
  c.disk_radius = get_num("disk_radius", 1e-6, 10, 0.1);
  c.disk_x = get_num("disk_x", -100, 100, 0.0);
  c.disk_y = get_num("disk_y", -100, 100, 0.5);
  c.n_powers = static_cast<int>(get_num("n_powers", 1, 16, 1));
  c.pair_budget = static_cast<long>(get_num("pair_budget", 1, 100000, 64));
  return c;
}

// Resolve a point spec: either a named zoo point or "x,y".
inline Vec2 resolve_point(const std::string& spec,
                          const std::map<std::string, Vec2>& named) {
  auto it = named.find(spec);
  if (it != named.end()) return it->second;
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw error(errc::config_error, "point '" + spec + "' is neither named nor 'x,y'");
  try {
    double x = std::stod(spec.substr(0, comma));
    double y = std::stod(spec.substr(comma + 1));
    return {x, y};
  } catch (const std::exception&) {
    throw error(errc::config_error, "cannot parse point '" + spec + "'");
  }
}

}  // namespace isolink
