#pragma once

#include "dgelast/common.hpp"

#include <array>
#include <vector>

namespace dgelast {

/// L2-orthonormal basis of P_r on the reference triangle, obtained by
/// orthonormalizing centred monomials.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return size_; }

  /// Values at xi.
  Vector values(const Vec2& xi) const;
  /// Gradients, one row per basis function.
  Eigen::MatrixX2d gradients(const Vec2& xi) const;
  /// Second derivatives, rows (d_xx, d_xy, d_yy).
  Eigen::MatrixX3d hessians(const Vec2& xi) const;

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

 private:
  void monomials(const Vec2& xi, Vector& m, Eigen::MatrixX2d* g, Eigen::MatrixX3d* h) const;

  int degree_;
  int size_;
  std::vector<std::array<int, 2>> exponents_;
  DenseMatrix coeffs_;  // basis_i = sum_j coeffs_(i, j) * monomial_j
};

}  // namespace dgelast
