#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace dgelast {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Vector-valued function of position.
using SpatialFunction = std::function<Vec2(const Vec2&)>;
/// Vector-valued function of time and position.
using SpaceTimeFunction = std::function<Vec2(double, const Vec2&)>;

/// Raised when the operands of an operation do not belong together
/// (different spaces, unrelated meshes, wrong sizes).
class IncompatibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of worker threads used by assembly and estimator loops.
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks,
/// one per thread; callers write to per-index slots so the result does not
/// depend on the thread count.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace dgelast
