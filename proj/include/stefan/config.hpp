#pragma once

// JSON problem configuration and report serialization.
//
//   {
//     "temperatures":   [u_0, ..., u_{n+1}],
//     "diffusivities":  [a_0, ..., a_n],
//     "conductivities": [k_0, ..., k_n],
//     "stefan_numbers": [d_1, ..., d_n],
//     "solver": { "grad_tol": ..., "max_iter": ..., "xi_max": ...,
//                 "boundary_fraction": ..., "damping_min": ... }   // optional
//   }

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "stefan/optimizer.hpp"
#include "stefan/problem.hpp"
#include "stefan/solution.hpp"
#include "stefan/wellposedness.hpp"

namespace stefan {

/// Malformed configuration. key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ProblemConfig {
  ProblemSpec spec;
  SolveOptions solver;
};

namespace detail {

inline std::vector<double> read_array(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key))
    throw ConfigError(key, "missing required key");
  const auto& node = doc.at(key);
  if (!node.is_array())
    throw ConfigError(key, "expected an array of numbers");
  std::vector<double> values;
  values.reserve(node.size());
  for (const auto& item : node) {
    if (!item.is_number())
      throw ConfigError(key, "expected an array of numbers");
    values.push_back(item.get<double>());
  }
  return values;
}

// Maps a ProblemSpec validation message ("field: reason") back to its key.
inline std::string config_key_of(const std::string& message) {
  static const std::pair<const char*, const char*> keys[] = {{"temperatures", "temperatures"},
                                                             {"diffusivities", "diffusivities"},
                                                             {"conductivities", "conductivities"},
                                                             {"stefan_numbers", "stefan_numbers"},
                                                             {"solver.", "solver"}};
  for (const auto& [prefix, key] : keys)
    if (message.rfind(prefix, 0) == 0)
      return key;
  return "config";
}

}  // namespace detail

inline SolveOptions parse_solve_options(const nlohmann::json& node, SolveOptions base = {}) {
  if (!node.is_object())
    throw ConfigError("solver", "expected an object");
  const auto number = [&](const char* key, double& field) {
    if (!node.contains(key))
      return;
    if (!node.at(key).is_number())
      throw ConfigError(std::string("solver.") + key, "expected a number");
    field = node.at(key).get<double>();
  };
  number("grad_tol", base.grad_tol);
  number("xi_max", base.xi_max);
  number("boundary_fraction", base.boundary_fraction);
  number("damping_min", base.damping_min);
  if (node.contains("max_iter")) {
    if (!node.at("max_iter").is_number_integer())
      throw ConfigError("solver.max_iter", "expected an integer");
    base.max_iter = node.at("max_iter").get<int>();
  }
  return base;
}

inline ProblemConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw ConfigError("config", "top level must be a JSON object");
  auto u = detail::read_array(doc, "temperatures");
  auto a = detail::read_array(doc, "diffusivities");
  auto k = detail::read_array(doc, "conductivities");
  auto d = detail::read_array(doc, "stefan_numbers");
  SolveOptions solver;
  if (doc.contains("solver"))
    solver = parse_solve_options(doc.at("solver"));
  try {
    solver.validate();
    return {ProblemSpec(std::move(u), std::move(a), std::move(k), std::move(d)), solver};
  } catch (const std::invalid_argument& ex) {
    const std::string message = ex.what();
    const std::string key = detail::config_key_of(message);
    const bool prefixed = message.rfind(key + ": ", 0) == 0;
    throw ConfigError(key, prefixed ? message.substr(key.size() + 2) : message);
  }
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& ex) {
    throw ConfigError("config", std::string("malformed JSON: ") + ex.what());
  }
  return parse_config(doc);
}

inline nlohmann::json to_json(const SolveOptions& o) {
  return {{"grad_tol", o.grad_tol},
          {"max_iter", o.max_iter},
          {"xi_max", o.xi_max},
          {"boundary_fraction", o.boundary_fraction},
          {"damping_min", o.damping_min}};
}

inline nlohmann::json to_json(const ProblemConfig& config) {
  const auto& s = config.spec;
  const auto vec = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
  return {{"temperatures", vec(s.temperatures())},
          {"diffusivities", vec(s.diffusivities())},
          {"conductivities", vec(s.conductivities())},
          {"stefan_numbers", vec(s.stefan_numbers())},
          {"solver", to_json(config.solver)}};
}

inline nlohmann::json to_json(const WellPosednessReport& r) {
  return {{"S_upper", r.upper_sums},
          {"S_lower", r.lower_sums},
          {"convexity_margins", r.convexity_margins},
          {"coercive", r.coercive},
          {"unique_solution_guaranteed", r.strictly_convex_sufficient},
          {"warnings", r.warnings}};
}

inline nlohmann::json to_json(const ResidualReport& r) {
  return {{"max_ode_residual", r.max_ode_residual},
          {"max_stefan_residual", r.max_stefan_residual},
          {"max_interface_jump", r.max_interface_jump},
          {"samples", r.samples}};
}

inline nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j = {{"status", to_string(r.status)},
                      {"energy", r.energy_value},
                      {"grad_norm", r.grad_norm},
                      {"iterations", r.iterations},
                      {"message", r.message},
                      {"last_iterate", r.last_iterate.vector()}};
  j["xi_star"] = r.xi_star ? nlohmann::json(r.xi_star->vector()) : nlohmann::json(nullptr);
  return j;
}

/// Shortest decimal string that parses back to the same double, always with
/// a decimal point or exponent ("0.0", "1.5", "2.0", "1e-20").
inline std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc())
    throw std::runtime_error("format_number: conversion failed");
  std::string s(buf, end);
  if (std::isfinite(value) && s.find_first_of(".e") == std::string::npos)
    s += ".0";
  return s;
}

}  // namespace stefan
