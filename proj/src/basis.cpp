#include "dgelast/basis.hpp"

#include "dgelast/quadrature.hpp"

#include <cmath>

namespace dgelast {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree), size_(dimension(degree)) {
  if (degree < 0) throw std::invalid_argument("ReferenceBasis: negative degree");
  for (int total = 0; total <= degree; ++total)
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
  coeffs_ = DenseMatrix::Identity(size_, size_);

  const TriangleRule rule = triangle_rule(2 * degree);
  for (int pass = 0; pass < 2; ++pass) {
    DenseMatrix gram = DenseMatrix::Zero(size_, size_);
    for (int q = 0; q < rule.size(); ++q) {
      const Vector v = values(rule.points[q]);
      gram.noalias() += rule.weights[q] * v * v.transpose();
    }
    Eigen::LLT<DenseMatrix> llt(gram);
    if (llt.info() != Eigen::Success) throw std::runtime_error("ReferenceBasis: Gram matrix not SPD");
    const DenseMatrix l = llt.matrixL();
    coeffs_ = l.triangularView<Eigen::Lower>().solve(coeffs_).eval();
  }
}

void ReferenceBasis::monomials(const Vec2& xi, Vector& m, Eigen::MatrixX2d* g, Eigen::MatrixX3d* h) const {
  const double x = xi.x() - 1.0 / 3.0, y = xi.y() - 1.0 / 3.0;
  m.resize(size_);
  if (g) g->setZero(size_, 2);
  if (h) h->setZero(size_, 3);
  for (int j = 0; j < size_; ++j) {
    const int a = exponents_[j][0], b = exponents_[j][1];
    m[j] = ipow(x, a) * ipow(y, b);
    if (g) {
      if (a > 0) (*g)(j, 0) = a * ipow(x, a - 1) * ipow(y, b);
      if (b > 0) (*g)(j, 1) = b * ipow(x, a) * ipow(y, b - 1);
    }
    if (h) {
      if (a > 1) (*h)(j, 0) = a * (a - 1) * ipow(x, a - 2) * ipow(y, b);
      if (a > 0 && b > 0) (*h)(j, 1) = a * b * ipow(x, a - 1) * ipow(y, b - 1);
      if (b > 1) (*h)(j, 2) = b * (b - 1) * ipow(x, a) * ipow(y, b - 2);
    }
  }
}

Vector ReferenceBasis::values(const Vec2& xi) const {
  Vector m;
  monomials(xi, m, nullptr, nullptr);
  return coeffs_ * m;
}

Eigen::MatrixX2d ReferenceBasis::gradients(const Vec2& xi) const {
  Vector m;
  Eigen::MatrixX2d g;
  monomials(xi, m, &g, nullptr);
  return coeffs_ * g;
}

Eigen::MatrixX3d ReferenceBasis::hessians(const Vec2& xi) const {
  Vector m;
  Eigen::MatrixX3d h;
  monomials(xi, m, nullptr, &h);
  return coeffs_ * h;
}

}  // namespace dgelast
