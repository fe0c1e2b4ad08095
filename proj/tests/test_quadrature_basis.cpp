#include "dgelast/basis.hpp"
#include "dgelast/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dgelast;

namespace {

// int_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!
double monomial_integral(int a, int b) { return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3); }

}  // namespace

TEST(Quadrature, TriangleExactness) {
  for (int deg = 0; deg <= 12; ++deg) {
    const TriangleRule rule = triangle_rule(deg);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    EXPECT_NEAR(wsum, 0.5, 1e-14);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double q = 0.0;
        for (int i = 0; i < rule.size(); ++i)
          q += rule.weights[i] * std::pow(rule.points[i].x(), a) * std::pow(rule.points[i].y(), b);
        EXPECT_NEAR(q, monomial_integral(a, b), 1e-13 * monomial_integral(a, b)) << deg << " " << a << " " << b;
      }
  }
}

TEST(Quadrature, LineExactness) {
  for (int deg = 0; deg <= 15; ++deg) {
    const LineRule rule = line_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      double q = 0.0;
      for (int i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i], a);
      EXPECT_NEAR(q, 1.0 / (a + 1), 1e-14);
    }
  }
}

TEST(Basis, OrthonormalOnReference) {
  for (int r = 0; r <= 4; ++r) {
    const ReferenceBasis b(r);
    EXPECT_EQ(b.size(), (r + 1) * (r + 2) / 2);
    const TriangleRule rule = triangle_rule(2 * r);
    DenseMatrix m = DenseMatrix::Zero(b.size(), b.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Vector v = b.values(rule.points[q]);
      m += rule.weights[q] * v * v.transpose();
    }
    EXPECT_LT((m - DenseMatrix::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), 1e-12) << r;
  }
}

TEST(Basis, DerivativesMatchFiniteDifferences) {
  const ReferenceBasis b(3);
  const Vec2 x(0.23, 0.41);
  const double h = 1e-5;
  const Eigen::MatrixX2d g = b.gradients(x);
  const Eigen::MatrixX3d hs = b.hessians(x);
  const Vector gx = (b.values(x + Vec2(h, 0)) - b.values(x - Vec2(h, 0))) / (2 * h);
  const Vector gy = (b.values(x + Vec2(0, h)) - b.values(x - Vec2(0, h))) / (2 * h);
  EXPECT_LT((gx - g.col(0)).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LT((gy - g.col(1)).cwiseAbs().maxCoeff(), 1e-7);
  const Eigen::MatrixX2d gxp = b.gradients(x + Vec2(h, 0)), gxm = b.gradients(x - Vec2(h, 0));
  const Eigen::MatrixX2d gyp = b.gradients(x + Vec2(0, h)), gym = b.gradients(x - Vec2(0, h));
  EXPECT_LT(((gxp.col(0) - gxm.col(0)) / (2 * h) - hs.col(0)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(((gxp.col(1) - gxm.col(1)) / (2 * h) - hs.col(1)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(((gyp.col(1) - gym.col(1)) / (2 * h) - hs.col(2)).cwiseAbs().maxCoeff(), 1e-6);
}
