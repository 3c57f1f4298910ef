#include "rwl1cli/config_json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "rwl1/error.hpp"

namespace rwl1::cli {

namespace {

json methods_json(const std::vector<Method>& ms) {
  json a = json::array();
  for (auto m : ms) a.push_back(std::string(to_string(m)));
  return a;
}

std::vector<Method> methods_from(const json& j) {
  require(j.is_array(), ErrorCode::kInvalidArgument, "'methods' must be an array of strings");
  std::vector<Method> out;
  for (const auto& e : j) {
    require(e.is_string(), ErrorCode::kInvalidArgument, "'methods' entries must be strings");
    out.push_back(parse_method(e.get<std::string>()));
  }
  return out;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), ErrorCode::kInvalidArgument, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    require(allowed.contains(key), ErrorCode::kInvalidArgument,
            "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kInvalidArgument, std::string("config key '") + key + "' has the wrong type");
  }
}

// Numbers arrive as JSON numbers; reject negatives before they wrap around.
template <typename T>
void read_unsigned(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  require(v.is_number_integer() && (v.is_number_unsigned() || v.get<long long>() >= 0),
          ErrorCode::kInvalidArgument,
          std::string("config key '") + key + "' must be a nonnegative integer");
  dst = v.get<T>();
}

}  // namespace

json to_json(const SolverConfig& c) {
  return {{"max_iters", c.max_iters},
          {"abs_tol", c.abs_tol},
          {"rel_tol", c.rel_tol},
          {"penalty", c.penalty},
          {"adaptive_penalty", c.adaptive_penalty},
          {"relaxation", c.relaxation},
          {"polish_interval", c.polish_interval},
          {"certificate_tol", c.certificate_tol}};
}

json to_json(const OuterConfig& c) {
  json j = {{"tol", c.tol},
            {"max_outer", c.max_outer},
            {"irl1_a_floor", c.irl1_a_floor},
            {"irl1_a_scale", c.irl1_a_scale},
            {"p_hat", c.p_hat},
            {"omega1", c.omega1},
            {"omega2", c.omega2},
            {"k_hat_override", nullptr},
            {"sdrl1_same_iterate_omega", c.sdrl1_same_iterate_omega},
            {"solver", to_json(c.solver)}};
  if (c.k_hat_override) j["k_hat_override"] = *c.k_hat_override;
  return j;
}

json to_json(const bench::SparseGridConfig& c) {
  return {{"N", c.N},
          {"n_fractions", c.n_fractions},
          {"k_over_n", c.k_over_n},
          {"trials", c.trials},
          {"seed", c.master_seed},
          {"recovery_tol", c.recovery_tol},
          {"methods", methods_json(c.methods)},
          {"workers", c.workers},
          {"outer", to_json(c.outer)}};
}

json to_json(const bench::CompressibleConfig& c) {
  return {{"N", c.N},
          {"n_over_N", c.n_over_N},
          {"p", c.p_values},
          {"c", c.c},
          {"trials", c.trials},
          {"seed", c.master_seed},
          {"methods", methods_json(c.methods)},
          {"workers", c.workers},
          {"outer", to_json(c.outer)}};
}

SolverConfig solver_from_json(const json& j) {
  check_keys(j,
             {"max_iters", "abs_tol", "rel_tol", "penalty", "adaptive_penalty", "relaxation",
              "polish_interval", "certificate_tol"},
             "solver config");
  SolverConfig c;
  read(j, "max_iters", c.max_iters);
  read(j, "abs_tol", c.abs_tol);
  read(j, "rel_tol", c.rel_tol);
  read(j, "penalty", c.penalty);
  read(j, "adaptive_penalty", c.adaptive_penalty);
  read(j, "relaxation", c.relaxation);
  read(j, "polish_interval", c.polish_interval);
  read(j, "certificate_tol", c.certificate_tol);
  return c;
}

OuterConfig outer_from_json(const json& j) {
  check_keys(j,
             {"tol", "max_outer", "irl1_a_floor", "irl1_a_scale", "p_hat", "omega1", "omega2",
              "k_hat_override", "sdrl1_same_iterate_omega", "solver"},
             "outer config");
  OuterConfig c;
  read(j, "tol", c.tol);
  read(j, "max_outer", c.max_outer);
  read(j, "irl1_a_floor", c.irl1_a_floor);
  read(j, "irl1_a_scale", c.irl1_a_scale);
  read(j, "p_hat", c.p_hat);
  read(j, "omega1", c.omega1);
  read(j, "omega2", c.omega2);
  read(j, "sdrl1_same_iterate_omega", c.sdrl1_same_iterate_omega);
  if (j.contains("k_hat_override") && !j.at("k_hat_override").is_null()) {
    std::size_t k = 0;
    read_unsigned(j, "k_hat_override", k);
    c.k_hat_override = k;
  }
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  return c;
}

bench::SparseGridConfig sparse_grid_from_json(const json& j) {
  check_keys(j,
             {"N", "n_fractions", "k_over_n", "trials", "seed", "recovery_tol", "methods",
              "workers", "outer"},
             "sparse-grid config");
  bench::SparseGridConfig c;
  read_unsigned(j, "N", c.N);
  read(j, "n_fractions", c.n_fractions);
  read(j, "k_over_n", c.k_over_n);
  read_unsigned(j, "trials", c.trials);
  read_unsigned(j, "seed", c.master_seed);
  read(j, "recovery_tol", c.recovery_tol);
  if (j.contains("methods")) c.methods = methods_from(j.at("methods"));
  read_unsigned(j, "workers", c.workers);
  if (j.contains("outer")) c.outer = outer_from_json(j.at("outer"));
  return c;
}

bench::CompressibleConfig compressible_from_json(const json& j) {
  check_keys(j, {"N", "n_over_N", "p", "c", "trials", "seed", "methods", "workers", "outer"},
             "compressible config");
  bench::CompressibleConfig c;
  read_unsigned(j, "N", c.N);
  read(j, "n_over_N", c.n_over_N);
  read(j, "p", c.p_values);
  read(j, "c", c.c);
  read_unsigned(j, "trials", c.trials);
  read_unsigned(j, "seed", c.master_seed);
  if (j.contains("methods")) c.methods = methods_from(j.at("methods"));
  read_unsigned(j, "workers", c.workers);
  if (j.contains("outer")) c.outer = outer_from_json(j.at("outer"));
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kIo, "config file " + path + " is not valid JSON: " + e.what());
  }
}

void overlay(json& base, const json& patch) {
  if (!base.is_object() || !patch.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [key, value] : patch.items()) {
    if (base.contains(key) && base[key].is_object() && value.is_object())
      overlay(base[key], value);
    else
      base[key] = value;
  }
}

}  // namespace rwl1::cli
