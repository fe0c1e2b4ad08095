#pragma once

#include "dgelast/sparse.hpp"

#include <string>
#include <vector>

namespace dgelast {

struct SolveOptions {
  double tol = 1e-10;  // relative residual
  int max_iter = 10000;
  int block_size = 0;  // block-Jacobi block size; 0 or 1 means point Jacobi
};

struct SolveResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0;  // relative
};

/// Raised when CG breaks down or runs out of iterations.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Preconditioned conjugate gradients with a block-Jacobi preconditioner
/// built from the diagonal blocks of A.
SolveResult solve_spd(const SparseOperator& a, const Vector& b, const SolveOptions& opts = {});

}  // namespace dgelast
