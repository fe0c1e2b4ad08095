#pragma once

#include "dgelast/common.hpp"

#include <vector>

namespace dgelast {

using Mandel = Eigen::Vector3d;
using MandelMatrix = Eigen::Matrix3d;

/// Symmetric 2x2 tensor -> (t11, t22, sqrt2 t12).
Mandel to_mandel(const Mat2& t);
Mat2 from_mandel(const Mandel& v);

struct SpectralBounds {
  double lower = 0.0;  // c_*
  double upper = 0.0;  // C*
};

/// Piecewise constant stiffness tensor in Mandel form, one 3x3 matrix per
/// material id.
class StiffnessTensor {
 public:
  /// Rejects non-symmetric or non positive definite matrices.
  explicit StiffnessTensor(std::vector<MandelMatrix> per_material);

  static StiffnessTensor from_lame(double lambda, double mu);
  static StiffnessTensor from_mandel(const MandelMatrix& m);

  int num_materials() const { return static_cast<int>(mats_.size()); }
  const MandelMatrix& matrix(int material) const;
  SpectralBounds bounds() const { return bounds_; }

  Mandel apply(int material, const Mandel& strain) const { return matrix(material) * strain; }
  Mat2 stress(int material, const Mat2& strain) const { return dgelast::from_mandel(apply(material, to_mandel(strain))); }

 private:
  std::vector<MandelMatrix> mats_;
  SpectralBounds bounds_;
};

SpectralBounds spectral_bounds(const StiffnessTensor& t);

}  // namespace dgelast
