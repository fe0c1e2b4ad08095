#include "dgelast/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace dgelast {

LineRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // ascending order on [0, 1]
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

LineRule line_rule(int degree) {
  const int n = std::max(1, (degree + 2) / 2);
  LineRule r = gauss_legendre(n);
  r.degree = std::max(degree, 0);
  return r;
}

TriangleRule triangle_rule(int degree) {
  degree = std::max(degree, 0);
  const int n = (degree + 3) / 2;  // ceil((degree + 2) / 2)
  const LineRule g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = g.points[i], v = g.points[j];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  return rule;
}

}  // namespace dgelast
