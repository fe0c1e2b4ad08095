#include "dgelast/material.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dgelast;

TEST(Material, LameIdentity) {
  const StiffnessTensor t = StiffnessTensor::from_lame(0.0, 0.5);
  EXPECT_NEAR((t.matrix(0) - MandelMatrix::Identity()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(t.bounds().lower, 1.0, 1e-14);
  EXPECT_NEAR(t.bounds().upper, 1.0, 1e-14);
}

TEST(Material, LameUnitBounds) {
  const StiffnessTensor t = StiffnessTensor::from_lame(1.0, 1.0);
  EXPECT_NEAR(t.bounds().lower, 2.0, 1e-13);
  EXPECT_NEAR(t.bounds().upper, 4.0, 1e-13);
  const Mat2 s = t.stress(0, Mat2::Identity());
  EXPECT_NEAR((s - 4.0 * Mat2::Identity()).norm(), 0.0, 1e-14);
}

TEST(Material, RejectsInvalid) {
  EXPECT_THROW(StiffnessTensor::from_lame(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(StiffnessTensor::from_lame(-1.0, 1.0), std::invalid_argument);
  MandelMatrix ns = MandelMatrix::Identity();
  ns(0, 1) = 0.5;
  EXPECT_THROW(StiffnessTensor::from_mandel(ns), std::invalid_argument);
  MandelMatrix indef = MandelMatrix::Identity();
  indef(2, 2) = -1.0;
  EXPECT_THROW(StiffnessTensor::from_mandel(indef), std::invalid_argument);
}

TEST(Material, MandelIsometry) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    Mat2 a;
    a << nd(rng), nd(rng), 0, nd(rng);
    a(1, 0) = a(0, 1);
    EXPECT_NEAR(to_mandel(a).squaredNorm(), (a.array() * a.array()).sum(), 1e-12);
    EXPECT_NEAR((from_mandel(to_mandel(a)) - a).norm(), 0.0, 1e-14);
  }
}

TEST(Material, RandomSpdBoundsAndSymmetry) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    MandelMatrix b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = nd(rng);
    const StiffnessTensor t = StiffnessTensor::from_mandel(b * b.transpose() + 0.1 * MandelMatrix::Identity());
    const SpectralBounds sb = spectral_bounds(t);
    for (int i = 0; i < 1000; ++i) {
      Mat2 tau;
      tau << nd(rng), nd(rng), 0, nd(rng);
      tau(1, 0) = tau(0, 1);
      const Mandel v = to_mandel(tau);
      const double e = v.dot(t.apply(0, v));
      EXPECT_GE(e, sb.lower * v.squaredNorm() * (1 - 1e-12));
      EXPECT_LE(t.apply(0, v).norm(), sb.upper * v.norm() * (1 + 1e-12));
      Mat2 eps;
      eps << nd(rng), nd(rng), 0, nd(rng);
      eps(1, 0) = eps(0, 1);
      // major symmetry: sigma(tau) : eps = sigma(eps) : tau
      EXPECT_NEAR((t.stress(0, tau).array() * eps.array()).sum(), (t.stress(0, eps).array() * tau.array()).sum(),
                  1e-12 * (1 + std::abs(e)));
    }
  }
}

TEST(Material, PiecewiseBoundsTakeExtremes) {
  const StiffnessTensor t({StiffnessTensor::from_lame(0.0, 0.5).matrix(0), StiffnessTensor::from_lame(1, 1).matrix(0)});
  EXPECT_NEAR(t.bounds().lower, 1.0, 1e-13);
  EXPECT_NEAR(t.bounds().upper, 4.0, 1e-13);
}
