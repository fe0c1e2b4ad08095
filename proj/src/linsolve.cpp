#include "dgelast/linsolve.hpp"

#include <cmath>

namespace dgelast {

namespace {

class BlockJacobi {
 public:
  BlockJacobi(const SparseOperator& a, int bs) : bs_(bs < 1 ? 1 : bs) {
    if (a.rows() % bs_ != 0) bs_ = 1;
    const int nblocks = a.rows() / bs_;
    inv_.resize(nblocks);
    std::vector<int> bad(nblocks, 0);
    parallel_for(nblocks, [&](int k) {
      const DenseMatrix d = a.dense_block(k * bs_, k * bs_, bs_, bs_);
      Eigen::LLT<DenseMatrix> llt(d);
      if (llt.info() != Eigen::Success) {
        bad[k] = 1;
        return;
      }
      inv_[k] = llt.solve(DenseMatrix::Identity(bs_, bs_));
    });
    for (int k = 0; k < nblocks; ++k)
      if (bad[k]) throw NonConvergenceError("solve_spd: diagonal block is not positive definite", 1.0, 0);
  }

  void apply(const Vector& r, Vector& z) const {
    z.resize(r.size());
    parallel_for(static_cast<int>(inv_.size()), [&](int k) {
      z.segment(k * bs_, bs_).noalias() = inv_[k] * r.segment(k * bs_, bs_);
    });
  }

 private:
  int bs_;
  std::vector<DenseMatrix> inv_;
};

}  // namespace

SolveResult solve_spd(const SparseOperator& a, const Vector& b, const SolveOptions& opts) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw IncompatibleError("solve_spd: dimension mismatch");
  SolveResult res;
  res.x = Vector::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) return res;

  const BlockJacobi pre(a, opts.block_size);
  Vector r = b, z, p, ap;
  double rz = 0.0;
  auto restart = [&] {
    pre.apply(r, z);
    p = z;
    rz = r.dot(z);
  };
  restart();
  for (int it = 1; it <= opts.max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0) || !std::isfinite(pap))
      throw NonConvergenceError("solve_spd: breakdown (operator not positive definite)", r.norm() / bnorm, it);
    const double step = rz / pap;
    res.x.noalias() += step * p;
    r.noalias() -= step * ap;
    res.iterations = it;
    res.residual = r.norm() / bnorm;
    if (res.residual <= opts.tol) {
      // The recursive residual drifts away from b - Ax near the rounding
      // floor; check the true one and, if needed, restart from it (a
      // refinement step with an accurately computed residual).
      r = a.residual(b, res.x);
      res.residual = r.norm() / bnorm;
      if (res.residual <= opts.tol) return res;
      restart();
      continue;
    }
    pre.apply(r, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw NonConvergenceError("solve_spd: no convergence after " + std::to_string(opts.max_iter) + " iterations",
                            res.residual, res.iterations);
}

}  // namespace dgelast
