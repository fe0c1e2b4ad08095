#pragma once

#include "dgelast/assembly.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgelast {

/// Smallest lambda with K x = lambda G x, G the Gram matrix of |||.|||.
double measured_coercivity(const DgSpace& space, const SparseOperator& k, double alpha);

/// max |a_h(u, v)| / (|||u||| |||v|||) over `pairs` random pairs.
double measured_continuity_ratio(const DgSpace& space, const SparseOperator& k, double alpha, int pairs,
                                 std::uint64_t seed);

struct InvariantResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick property suite on small meshes (seconds).
std::vector<InvariantResult> run_invariant_checks(std::uint64_t seed = 7);
void print_invariant_results(std::ostream& out, const std::vector<InvariantResult>& results);

}  // namespace dgelast
