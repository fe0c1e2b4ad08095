#include "dgelast/linsolve.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dgelast;

namespace {

SparseOperator from_dense(const DenseMatrix& a) {
  std::vector<int> rp{0}, ci;
  std::vector<double> v;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) {
        ci.push_back(j);
        v.push_back(a(i, j));
      }
    rp.push_back(static_cast<int>(ci.size()));
  }
  return SparseOperator(static_cast<int>(a.rows()), static_cast<int>(a.cols()), rp, ci, v);
}

DenseMatrix random_spd(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DenseMatrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = nd(rng);
  return b * b.transpose() + n * DenseMatrix::Identity(n, n);
}

}  // namespace

TEST(Linsolve, ZeroRightHandSide) {
  const SolveResult r = solve_spd(from_dense(random_spd(10, 1)), Vector::Zero(10));
  EXPECT_EQ(r.x.norm(), 0.0);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Linsolve, IdentityInOneIteration) {
  const Vector b = Vector::LinSpaced(30, -1.0, 2.0);
  const SolveResult r = solve_spd(from_dense(DenseMatrix::Identity(30, 30)), b);
  EXPECT_LE(r.iterations, 1);
  EXPECT_LT((r.x - b).norm(), 1e-14);
}

TEST(Linsolve, MatchesDenseFactorization) {
  const DenseMatrix a = random_spd(50, 2);
  const Vector b = Vector::LinSpaced(50, 0.5, -3.0);
  for (int block : {0, 5}) {
    SolveOptions opts;
    opts.block_size = block;
    const SolveResult r = solve_spd(from_dense(a), b, opts);
    const Vector oracle = a.llt().solve(b);
    EXPECT_LE((a * r.x - b).norm() / b.norm(), opts.tol);
    EXPECT_LT((r.x - oracle).norm() / oracle.norm(), 1e-8);
  }
}

TEST(Linsolve, Deterministic) {
  const DenseMatrix a = random_spd(40, 3);
  const Vector b = Vector::Ones(40);
  const SolveResult r1 = solve_spd(from_dense(a), b), r2 = solve_spd(from_dense(a), b);
  EXPECT_EQ(r1.iterations, r2.iterations);
  EXPECT_TRUE((r1.x.array() == r2.x.array()).all());
}

TEST(Linsolve, ReportsNonConvergence) {
  SolveOptions opts;
  opts.max_iter = 2;
  opts.tol = 1e-14;
  try {
    solve_spd(from_dense(random_spd(60, 4)), Vector::Ones(60), opts);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_GT(e.residual(), 1e-14);
    EXPECT_EQ(e.iterations(), 2);
  }
}

TEST(Linsolve, RejectsIndefinite) {
  DenseMatrix a = DenseMatrix::Identity(4, 4);
  a(2, 2) = -1.0;
  EXPECT_THROW(solve_spd(from_dense(a), Vector::Ones(4)), NonConvergenceError);
}
