#include "dgelast/material.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dgelast {

Mandel to_mandel(const Mat2& t) { return Mandel(t(0, 0), t(1, 1), std::sqrt(2.0) * 0.5 * (t(0, 1) + t(1, 0))); }

Mat2 from_mandel(const Mandel& v) {
  const double s = v[2] / std::sqrt(2.0);
  Mat2 t;
  t << v[0], s, s, v[1];
  return t;
}

StiffnessTensor::StiffnessTensor(std::vector<MandelMatrix> per_material) : mats_(std::move(per_material)) {
  if (mats_.empty()) throw std::invalid_argument("StiffnessTensor: no materials");
  bounds_.lower = std::numeric_limits<double>::infinity();
  bounds_.upper = 0.0;
  for (size_t i = 0; i < mats_.size(); ++i) {
    const MandelMatrix& m = mats_[i];
    if (!m.allFinite()) throw std::invalid_argument("StiffnessTensor: non-finite entries");
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("StiffnessTensor: material " + std::to_string(i) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<MandelMatrix> es(0.5 * (m + m.transpose()));
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
      throw std::invalid_argument("StiffnessTensor: material " + std::to_string(i) + " is not positive definite");
    bounds_.lower = std::min(bounds_.lower, lo);
    bounds_.upper = std::max(bounds_.upper, hi);
  }
}

StiffnessTensor StiffnessTensor::from_lame(double lambda, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("from_lame: mu must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("from_lame: lambda must be nonnegative");
  MandelMatrix m;
  m << 2 * mu + lambda, lambda, 0, lambda, 2 * mu + lambda, 0, 0, 0, 2 * mu;
  return StiffnessTensor({m});
}

StiffnessTensor StiffnessTensor::from_mandel(const MandelMatrix& m) { return StiffnessTensor({m}); }

const MandelMatrix& StiffnessTensor::matrix(int material) const {
  if (material < 0 || material >= num_materials())
    throw std::out_of_range("StiffnessTensor: unknown material id " + std::to_string(material));
  return mats_[material];
}

SpectralBounds spectral_bounds(const StiffnessTensor& t) { return t.bounds(); }

}  // namespace dgelast
