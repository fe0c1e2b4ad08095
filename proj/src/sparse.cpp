#include "dgelast/sparse.hpp"

#include "dgelast/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dgelast {

SparseOperator::SparseOperator(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                               std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<int>(values_.size()))
    throw std::invalid_argument("SparseOperator: inconsistent CSR arrays");
}

void SparseOperator::multiply(const Vector& x, Vector& y) const {
  if (x.size() != cols_) throw IncompatibleError("SparseOperator: vector length mismatch");
  y.resize(rows_);
  const int chunk = 256;
  parallel_for((rows_ + chunk - 1) / chunk, [&](int c) {
    const int r1 = std::min(rows_, (c + 1) * chunk);
    for (int i = c * chunk; i < r1; ++i) {
      double s = 0.0;
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
      y[i] = s;
    }
  });
}

Vector SparseOperator::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

Vector SparseOperator::residual(const Vector& b, const Vector& x) const {
  if (x.size() != cols_ || b.size() != rows_) throw IncompatibleError("SparseOperator::residual: size mismatch");
  Vector r(rows_);
  parallel_for((rows_ + 255) / 256, [&](int chunk) {
    const int end = std::min(rows_, (chunk + 1) * 256);
    for (int i = chunk * 256; i < end; ++i) {
      long double acc = b[i];
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
        acc -= static_cast<long double>(values_[p]) * static_cast<long double>(x[col_idx_[p]]);
      r[i] = static_cast<double>(acc);
    }
  });
  return r;
}

SparseOperator SparseOperator::transpose() const {
  std::vector<int> ptr(cols_ + 1, 0);
  for (int c : col_idx_) ++ptr[c + 1];
  for (int j = 0; j < cols_; ++j) ptr[j + 1] += ptr[j];
  std::vector<int> pos(ptr.begin(), ptr.end() - 1);
  std::vector<int> idx(values_.size());
  std::vector<double> val(values_.size());
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int q = pos[col_idx_[p]]++;
      idx[q] = i;
      val[q] = values_[p];
    }
  return SparseOperator(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

SparseOperator SparseOperator::add(const SparseOperator& o, double alpha, double beta) const {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw IncompatibleError("SparseOperator::add: shape mismatch");
  std::vector<int> ptr{0};
  std::vector<int> idx;
  std::vector<double> val;
  for (int i = 0; i < rows_; ++i) {
    int p = row_ptr_[i], q = o.row_ptr_[i];
    const int pe = row_ptr_[i + 1], qe = o.row_ptr_[i + 1];
    while (p < pe || q < qe) {
      if (q >= qe || (p < pe && col_idx_[p] < o.col_idx_[q])) {
        idx.push_back(col_idx_[p]);
        val.push_back(alpha * values_[p++]);
      } else if (p >= pe || o.col_idx_[q] < col_idx_[p]) {
        idx.push_back(o.col_idx_[q]);
        val.push_back(beta * o.values_[q++]);
      } else {
        idx.push_back(col_idx_[p]);
        val.push_back(alpha * values_[p++] + beta * o.values_[q++]);
      }
    }
    ptr.push_back(static_cast<int>(idx.size()));
  }
  return SparseOperator(rows_, cols_, std::move(ptr), std::move(idx), std::move(val));
}

SparseOperator SparseOperator::multiply(const SparseOperator& o) const {
  if (cols_ != o.rows_) throw IncompatibleError("SparseOperator::multiply: shape mismatch");
  std::vector<int> ptr{0};
  std::vector<int> idx;
  std::vector<double> val;
  std::vector<double> acc(o.cols_, 0.0);
  std::vector<char> used(o.cols_, 0);
  std::vector<int> cols;
  for (int i = 0; i < rows_; ++i) {
    cols.clear();
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int k = col_idx_[p];
      for (int q = o.row_ptr_[k]; q < o.row_ptr_[k + 1]; ++q) {
        const int j = o.col_idx_[q];
        if (!used[j]) {
          used[j] = 1;
          cols.push_back(j);
        }
        acc[j] += values_[p] * o.values_[q];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (int j : cols) {
      idx.push_back(j);
      val.push_back(acc[j]);
      acc[j] = 0.0;
      used[j] = 0;
    }
    ptr.push_back(static_cast<int>(idx.size()));
  }
  return SparseOperator(rows_, o.cols_, std::move(ptr), std::move(idx), std::move(val));
}

SparseOperator SparseOperator::shifted(double s) const {
  if (rows_ != cols_) throw IncompatibleError("SparseOperator::shifted: not square");
  std::vector<int> ptr{0};
  std::vector<int> idx(row_ptr_.size() - 1);
  std::vector<double> val(row_ptr_.size() - 1, s);
  for (int i = 0; i < rows_; ++i) {
    idx[i] = i;
    ptr.push_back(i + 1);
  }
  SparseOperator diag(rows_, cols_, std::move(ptr), std::move(idx), std::move(val));
  return add(diag);
}

double SparseOperator::entry(int i, int j) const {
  const auto b = col_idx_.begin() + row_ptr_[i], e = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  return (it != e && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

DenseMatrix SparseOperator::dense_block(int row0, int col0, int nrows, int ncols) const {
  DenseMatrix m = DenseMatrix::Zero(nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int p = row_ptr_[row0 + i]; p < row_ptr_[row0 + i + 1]; ++p) {
      const int j = col_idx_[p] - col0;
      if (j >= 0 && j < ncols) m(i, j) = values_[p];
    }
  return m;
}

DenseMatrix SparseOperator::to_dense() const { return dense_block(0, 0, rows_, cols_); }

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::asymmetry() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  const SparseOperator d = add(transpose(), 1.0, -1.0);
  return d.max_abs() / scale;
}

BlockSparseBuilder::BlockSparseBuilder(int block_rows, int row_block_size, int block_cols, int col_block_size,
                                       const std::vector<std::vector<int>>& block_pattern)
    : brows_(block_rows), rbs_(row_block_size), bcols_(block_cols), cbs_(col_block_size), pattern_(block_pattern) {
  if (static_cast<int>(pattern_.size()) != brows_) throw std::invalid_argument("BlockSparseBuilder: pattern size");
  row_ptr_.assign(brows_ * rbs_ + 1, 0);
  int nnz = 0;
  for (int b = 0; b < brows_; ++b) {
    std::sort(pattern_[b].begin(), pattern_[b].end());
    const int width = static_cast<int>(pattern_[b].size()) * cbs_;
    for (int r = 0; r < rbs_; ++r) {
      nnz += width;
      row_ptr_[b * rbs_ + r + 1] = nnz;
    }
  }
  col_idx_.resize(nnz);
  values_.assign(nnz, 0.0);
  for (int b = 0; b < brows_; ++b)
    for (int r = 0; r < rbs_; ++r) {
      int p = row_ptr_[b * rbs_ + r];
      for (int bc : pattern_[b])
        for (int c = 0; c < cbs_; ++c) col_idx_[p++] = bc * cbs_ + c;
    }
}

void BlockSparseBuilder::add(int block_row, int block_col, const DenseMatrix& block) {
  const auto& pat = pattern_[block_row];
  const auto it = std::lower_bound(pat.begin(), pat.end(), block_col);
  if (it == pat.end() || *it != block_col) throw std::logic_error("BlockSparseBuilder: block outside pattern");
  const int slot = static_cast<int>(it - pat.begin());
  for (int r = 0; r < rbs_; ++r) {
    const int base = row_ptr_[block_row * rbs_ + r] + slot * cbs_;
    for (int c = 0; c < cbs_; ++c) values_[base + c] += block(r, c);
  }
}

SparseOperator BlockSparseBuilder::build() const {
  return SparseOperator(brows_ * rbs_, bcols_ * cbs_, row_ptr_, col_idx_, values_);
}

std::vector<std::vector<int>> element_pattern(const Mesh& mesh) {
  std::vector<std::vector<int>> pat(mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    pat[k].push_back(k);
    for (int nb : mesh.neighbors(k))
      if (nb >= 0) pat[k].push_back(nb);
    std::sort(pat[k].begin(), pat[k].end());
  }
  return pat;
}

void write_matrix_market(std::ostream& out, const SparseOperator& a) {
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nonzeros() << "\n";
  for (int i = 0; i < a.rows(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      out << i + 1 << " " << a.col_idx()[p] + 1 << " " << a.values()[p] << "\n";
}

}  // namespace dgelast
