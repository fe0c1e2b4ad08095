#include "dgelast/assembly.hpp"
#include "dgelast/lagrange.hpp"
#include "dgelast/manufactured.hpp"
#include "dgelast/stationary.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dgelast;

namespace {

struct Solved {
  SpacePtr space;
  StiffnessTensor mat = StiffnessTensor::from_lame(1.0, 1.0);
  PenaltyConfig penalty;
  SparseOperator k;
  ResidualSource source;
  DgField z;
};

Solved solve_case(const ManufacturedCase& c, std::shared_ptr<const Mesh> mesh, int r) {
  auto space = std::make_shared<const DgSpace>(std::move(mesh), r);
  Solved s{space, c.material(), {}, {}, ResidualSource::from_function(c.at(c.f, 0.0)), DgField(space)};
  s.penalty = default_penalty(estimate_inverse_constant(*space), s.mat);
  s.k = assemble_ah(*space, s.mat, s.penalty);
  SolveOptions opts;
  opts.tol = 1e-11;
  s.z = solve_stationary(space, s.k, s.source, opts);
  return s;
}

Solved solve_case(const ManufacturedCase& c, int n, int r) {
  return solve_case(c, std::make_shared<const Mesh>(build_structured(n)), r);
}

DgField random_field(const SpacePtr& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DgField f(s);
  for (Eigen::Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = nd(rng);
  return f;
}

}  // namespace

TEST(Stationary, ZeroDataGivesZero) {
  const Solved s = solve_case(zero_case(), 4, 1);
  EXPECT_EQ(s.z.coeffs().norm(), 0.0);
  EXPECT_EQ(estimate_duality(s.z, s.source, s.mat).value, 0.0);
  EXPECT_EQ(estimate_energy(s.z, s.source, s.mat, 1.0, s.penalty.alpha).value, 0.0);
}

TEST(Stationary, GalerkinOrthogonality) {
  const Solved s = solve_case(stationary_sin_case(), 8, 2);
  const Vector res = s.source.moments(s.space) - s.k * s.z.coeffs();
  EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Stationary, PolynomialSolutionIsReproduced) {
  const ManufacturedCase c = stationary_polynomial_case();
  const Solved s = solve_case(c, 3, 4);
  EXPECT_LT(l2_distance(s.z, c.at(c.u, 0.0)), 1e-10);
  const EstimatorBreakdown d = estimate_duality(s.z, s.source, s.mat);
  EXPECT_LT(d.value, 1e-9);
}

TEST(Stationary, L2ConvergenceRate) {
  const ManufacturedCase c = stationary_sin_case();
  const SpatialFunction u = c.at(c.u, 0.0);
  for (int r : {1, 2}) {
    double prev = 0.0;
    for (int n : {4, 8, 16}) {
      const double e = l2_distance(solve_case(c, n, r).z, u);
      if (prev > 0.0) EXPECT_GE(std::log2(prev / e), r + 0.8) << "r=" << r << " n=" << n;
      prev = e;
    }
  }
}

TEST(Stationary, EstimatorStructure) {
  const Solved s = solve_case(stationary_sin_case(), 4, 1);
  for (const EstimatorBreakdown& b :
       {estimate_duality(s.z, s.source, s.mat, 1.7), estimate_energy(s.z, s.source, s.mat, 0.3, s.penalty.alpha)}) {
    EXPECT_NEAR(b.value * b.value, b.eta.squaredNorm(), 1e-12 * b.value * b.value);
    EXPECT_NEAR(b.value * b.value, b.volume + b.stress_jump + b.solution_jump, 1e-12 * b.value * b.value);
    EXPECT_GE(b.volume, 0.0);
    EXPECT_GE(b.stress_jump, 0.0);
    EXPECT_GE(b.solution_jump, 0.0);
    EXPECT_GE(b.eta.minCoeff(), 0.0);
  }
  // the calibration constant multiplies the estimator
  EXPECT_NEAR(estimate_duality(s.z, s.source, s.mat, 2.0).value, 2.0 * estimate_duality(s.z, s.source, s.mat).value,
              1e-12);
}

TEST(Stationary, EstimatorHomogeneity) {
  const ManufacturedCase c = stationary_sin_case();
  const Solved s = solve_case(c, 4, 2);
  const SpatialFunction f = c.at(c.f, 0.0);
  for (double scale : {-3.0, 0.5}) {
    const ResidualSource scaled = ResidualSource::from_function([&](const Vec2& x) { return Vec2(scale * f(x)); });
    const double e1 = estimate_duality(s.z, s.source, s.mat).value;
    const double e2 = estimate_duality(scale * DgField(s.z), scaled, s.mat).value;
    EXPECT_NEAR(e2, std::abs(scale) * e1, 1e-12 * e1);
  }
}

TEST(Stationary, DoublingJumpsDoublesJumpTerms) {
  // z = smooth (continuous stress, zero trace) + d; doubling d doubles every jump
  const ManufacturedCase c = stationary_polynomial_case();
  const auto space = std::make_shared<const DgSpace>(std::make_shared<const Mesh>(build_structured(3)), 4);
  const DgField smooth = l2_project_function(space, c.at(c.u, 0.0));
  const DgField d = 1e-2 * random_field(space, 3);
  const ResidualSource r = ResidualSource::from_function(c.at(c.f, 0.0));
  const StiffnessTensor mat = c.material();
  const ResidualTerms t1 = residual_terms(smooth + d, r, mat);
  const ResidualTerms t2 = residual_terms(smooth + 2.0 * DgField(d), r, mat);
  EXPECT_NEAR(t2.stress_jump.sum(), 4.0 * t1.stress_jump.sum(), 1e-9 * t1.stress_jump.sum());
  EXPECT_NEAR(t2.solution_jump.sum(), 4.0 * t1.solution_jump.sum(), 1e-9 * t1.solution_jump.sum());
}

TEST(Stationary, EnergyToDualityRatioGrowsLikeInverseH) {
  const ManufacturedCase c = stationary_sin_case();
  std::vector<double> ratio;
  for (int n : {4, 8, 16}) {
    const Solved s = solve_case(c, n, 1);
    ratio.push_back(estimate_energy(s.z, s.source, s.mat, 1.0, s.penalty.alpha).value /
                    estimate_duality(s.z, s.source, s.mat).value);
  }
  for (int i = 1; i < 3; ++i) EXPECT_NEAR(std::log2(ratio[i - 1] / ratio[i]), -1.0, 0.2);
}

TEST(Stationary, IndependentOfElementOrdering) {
  const ManufacturedCase c = stationary_sin_case();
  const Mesh m = build_structured(4);
  std::vector<std::array<int, 3>> tris(m.triangles().rbegin(), m.triangles().rend());
  for (auto& t : tris) std::rotate(t.begin(), t.begin() + 1, t.end());
  const Solved a = solve_case(c, std::make_shared<const Mesh>(m), 2);
  const Solved b = solve_case(c, std::make_shared<const Mesh>(Mesh(m.vertices(), tris)), 2);
  const double ea = estimate_duality(a.z, a.source, a.mat).value;
  const double eb = estimate_duality(b.z, b.source, b.mat).value;
  EXPECT_NEAR(ea, eb, 1e-9 * ea);
}

TEST(Recovery, IdentityOnConformingFields) {
  const auto space = std::make_shared<const DgSpace>(std::make_shared<const Mesh>(build_structured(3)), 2);
  const DgField c = conforming_recovery(random_field(space, 5));
  const DgField cc = conforming_recovery(c);
  EXPECT_LT((cc.coeffs() - c.coeffs()).norm(), 1e-12 * c.coeffs().norm());
  const RecoveryRatios r = recovery_ratios(c, cc);
  EXPECT_EQ(r.l2_ratio, 0.0);
  EXPECT_EQ(r.h1_ratio, 0.0);
}

TEST(Recovery, CheckerboardRatiosStableUnderRefinement) {
  const SpatialFunction checker = [](const Vec2& x) {
    const int i = static_cast<int>(std::floor(4 * x.x())) + static_cast<int>(std::floor(4 * x.y()));
    return Vec2(i % 2 ? 1.0 : -1.0, 0.5);
  };
  std::vector<RecoveryRatios> rs;
  for (int n : {4, 8}) {
    const auto space = std::make_shared<const DgSpace>(std::make_shared<const Mesh>(build_structured(n)), 1);
    const DgField z = l2_project_function(space, checker);
    rs.push_back(recovery_ratios(z, conforming_recovery(z)));
    EXPECT_TRUE(std::isfinite(rs.back().l2_ratio));
    EXPECT_GT(rs.back().l2_ratio, 0.0);
  }
  EXPECT_LT(std::max(rs[0].l2_ratio, rs[1].l2_ratio) / std::min(rs[0].l2_ratio, rs[1].l2_ratio), 2.0);
  EXPECT_LT(std::max(rs[0].h1_ratio, rs[1].h1_ratio) / std::min(rs[0].h1_ratio, rs[1].h1_ratio), 2.0);
}
