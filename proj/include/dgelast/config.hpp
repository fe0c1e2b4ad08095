#pragma once

#include "dgelast/stationary.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dgelast {

/// Study description read from a key = value file. See configs/SCHEMA.md.
struct StudyConfig {
  std::string case_name = "transient_sin";
  double lambda = 1.0, mu = 1.0;
  std::vector<int> mesh_sizes{4, 8, 16, 32};
  std::vector<int> degrees{1};
  /// Number of time steps per run (tau = final_time / steps).
  std::vector<int> steps{10, 20, 40};
  double final_time = 1.0;
  /// "auto" (factor * alpha_min) or "fixed" (penalty_value).
  std::string penalty = "auto";
  double penalty_factor = 2.0;
  double penalty_value = 0.0;
  EstimatorVariant estimator = EstimatorVariant::duality;
  /// <= 0: fit on the coarsest stationary run.
  double calibration = 0.0;
  /// <= 0: domain diameter / pi.
  double poincare = 0.0;
  /// constant | refine_half | both
  std::string scenario = "both";
  bool stationary_alternative = false;
  bool quadrature_check = false;
  bool write_vtk = false;
  double solver_tol = 1e-10;
  std::uint64_t seed = 7;
  std::string output_dir = "out";
  std::string output_prefix = "study";

  /// Canonical key = value text; the hash recorded in outputs is taken of it.
  std::string canonical() const;
  std::string hash() const;
};

/// Raw entries; blank lines and '#' comments are skipped. Throws
/// std::invalid_argument with the line number on malformed input.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Checks every key against the schema (unknown keys, types, ranges).
StudyConfig config_from_entries(const std::map<std::string, std::string>& entries);
StudyConfig read_config(std::istream& in);
StudyConfig read_config_file(const std::string& path);

}  // namespace dgelast
