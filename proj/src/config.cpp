#include "dgelast/config.hpp"

#include "dgelast/indicators.hpp"
#include "dgelast/manufactured.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dgelast {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw std::invalid_argument("config key '" + key + "': " + msg);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "expected true/false, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v, int min_value,
                             int max_value = std::numeric_limits<int>::max()) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long long x = to_int(key, trim(item));
    if (x < min_value) bad(key, "entries must be >= " + std::to_string(min_value));
    if (x > max_value) bad(key, "entries must be <= " + std::to_string(max_value));
    out.push_back(static_cast<int>(x));
  }
  if (out.empty()) bad(key, "empty list");
  return out;
}

double auto_or(const std::string& key, const std::string& v) { return v == "auto" ? 0.0 : to_double(key, v); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    if (!out.emplace(key, value).second)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return out;
}

StudyConfig config_from_entries(const std::map<std::string, std::string>& entries) {
  StudyConfig c;
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> schema{
      {"case",
       [&](const std::string& k, const std::string& v) {
         try {
           manufactured_case(v);
         } catch (const std::invalid_argument& e) {
           bad(k, e.what());
         }
         c.case_name = v;
       }},
      {"lambda",
       [&](const std::string& k, const std::string& v) {
         c.lambda = to_double(k, v);
         if (c.lambda < 0) bad(k, "must be >= 0");
       }},
      {"mu",
       [&](const std::string& k, const std::string& v) {
         c.mu = to_double(k, v);
         if (c.mu <= 0) bad(k, "must be > 0");
       }},
      {"mesh_sizes", [&](const std::string& k, const std::string& v) { c.mesh_sizes = to_int_list(k, v, 1); }},
      {"degrees", [&](const std::string& k, const std::string& v) { c.degrees = to_int_list(k, v, 1, 3); }},
      {"steps", [&](const std::string& k, const std::string& v) { c.steps = to_int_list(k, v, 1); }},
      {"final_time",
       [&](const std::string& k, const std::string& v) {
         c.final_time = to_double(k, v);
         if (c.final_time <= 0) bad(k, "must be > 0");
       }},
      {"penalty",
       [&](const std::string& k, const std::string& v) {
         if (v != "auto" && v != "fixed") bad(k, "expected auto or fixed");
         c.penalty = v;
       }},
      {"penalty_factor",
       [&](const std::string& k, const std::string& v) {
         c.penalty_factor = to_double(k, v);
         if (c.penalty_factor < 1) bad(k, "must be >= 1 (coercivity needs alpha >= alpha_min)");
       }},
      {"penalty_value",
       [&](const std::string& k, const std::string& v) {
         c.penalty_value = to_double(k, v);
         if (c.penalty_value <= 0) bad(k, "must be > 0");
       }},
      {"estimator",
       [&](const std::string& k, const std::string& v) {
         try {
           c.estimator = estimator_variant_from_string(v);
         } catch (const std::invalid_argument& e) {
           bad(k, e.what());
         }
       }},
      {"calibration", [&](const std::string& k, const std::string& v) { c.calibration = auto_or(k, v); }},
      {"poincare", [&](const std::string& k, const std::string& v) { c.poincare = auto_or(k, v); }},
      {"scenario",
       [&](const std::string& k, const std::string& v) {
         if (v != "constant" && v != "refine_half" && v != "both") bad(k, "expected constant, refine_half or both");
         c.scenario = v;
       }},
      {"stationary_alternative",
       [&](const std::string& k, const std::string& v) { c.stationary_alternative = to_bool(k, v); }},
      {"quadrature_check", [&](const std::string& k, const std::string& v) { c.quadrature_check = to_bool(k, v); }},
      {"write_vtk", [&](const std::string& k, const std::string& v) { c.write_vtk = to_bool(k, v); }},
      {"solver_tol",
       [&](const std::string& k, const std::string& v) {
         c.solver_tol = to_double(k, v);
         if (c.solver_tol <= 0 || c.solver_tol >= 1) bad(k, "must lie in (0, 1)");
       }},
      {"seed",
       [&](const std::string& k, const std::string& v) {
         const long long s = to_int(k, v);
         if (s < 0) bad(k, "must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"output_dir", [&](const std::string&, const std::string& v) { c.output_dir = v; }},
      {"output_prefix", [&](const std::string&, const std::string& v) { c.output_prefix = v; }},
  };
  for (const auto& [k, v] : entries) {
    const auto it = schema.find(k);
    if (it == schema.end()) bad(k, "unknown key");
    it->second(k, v);
  }
  if (c.penalty == "fixed" && c.penalty_value <= 0) bad("penalty_value", "required when penalty = fixed");
  return c;
}

StudyConfig read_config(std::istream& in) { return config_from_entries(parse_key_values(in)); }

StudyConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return read_config(in);
}

std::string StudyConfig::canonical() const {
  std::ostringstream s;
  s.precision(17);
  s << "calibration = " << calibration << "\n"
    << "case = " << case_name << "\n"
    << "degrees = " << join(degrees) << "\n"
    << "estimator = " << to_string(estimator) << "\n"
    << "final_time = " << final_time << "\n"
    << "lambda = " << lambda << "\n"
    << "mesh_sizes = " << join(mesh_sizes) << "\n"
    << "mu = " << mu << "\n"
    << "penalty = " << penalty << "\n"
    << "penalty_factor = " << penalty_factor << "\n"
    << "penalty_value = " << penalty_value << "\n"
    << "poincare = " << poincare << "\n"
    << "quadrature_check = " << quadrature_check << "\n"
    << "scenario = " << scenario << "\n"
    << "seed = " << seed << "\n"
    << "solver_tol = " << solver_tol << "\n"
    << "stationary_alternative = " << stationary_alternative << "\n"
    << "steps = " << join(steps) << "\n";
  return s.str();
}

std::string StudyConfig::hash() const { return fnv1a_hex(canonical()); }

}  // namespace dgelast
