#pragma once

#include "dgelast/common.hpp"

#include <iosfwd>
#include <vector>

namespace dgelast {

class Mesh;

/// Compressed sparse row matrix. Column indices are sorted within a row.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nonzeros() const { return static_cast<int>(values_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  Vector operator*(const Vector& x) const;
  void multiply(const Vector& x, Vector& y) const;

  /// b - A x with extended-precision row sums.
  Vector residual(const Vector& b, const Vector& x) const;

  SparseOperator transpose() const;
  /// alpha * this + beta * other (patterns may differ).
  SparseOperator add(const SparseOperator& other, double alpha = 1.0, double beta = 1.0) const;
  SparseOperator multiply(const SparseOperator& other) const;
  /// this + s * I (square only).
  SparseOperator shifted(double s) const;

  double entry(int i, int j) const;
  DenseMatrix dense_block(int row0, int col0, int nrows, int ncols) const;
  DenseMatrix to_dense() const;
  double max_abs() const;
  /// max |A - A^T| / max |A|
  double asymmetry() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Pattern made of dense blocks: block row b couples to a sorted list of
/// block columns. Blocks are accumulated in place.
class BlockSparseBuilder {
 public:
  BlockSparseBuilder(int block_rows, int row_block_size, int block_cols, int col_block_size,
                     const std::vector<std::vector<int>>& block_pattern);

  void add(int block_row, int block_col, const DenseMatrix& block);
  SparseOperator build() const;

 private:
  int brows_, rbs_, bcols_, cbs_;
  std::vector<std::vector<int>> pattern_;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Element adjacency pattern (self plus face neighbours, sorted).
std::vector<std::vector<int>> element_pattern(const Mesh& mesh);

void write_matrix_market(std::ostream& out, const SparseOperator& a);

}  // namespace dgelast
