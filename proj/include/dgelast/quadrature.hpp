#pragma once

#include "dgelast/common.hpp"

#include <vector>

namespace dgelast {

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
LineRule gauss_legendre(int n);

/// Gauss rule on [0, 1] exact for polynomials of the given degree.
LineRule line_rule(int degree);

/// Collapsed tensor Gauss rule exact for polynomials of the given degree.
TriangleRule triangle_rule(int degree);

}  // namespace dgelast
