#include "dgelast/indicators.hpp"
#include "dgelast/manufactured.hpp"
#include "dgelast/studies.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dgelast;

namespace {

TransientTrace run(const ManufacturedCase& c, int n, int r, int steps, Scenario sc) {
  TransientOptions opts;
  opts.solver.tol = 1e-12;
  return backward_euler_run(make_problem(c, n, r, steps, sc, StudyConfig{}), opts);
}

// fine mesh for the first half, coarse afterwards
TransientTrace run_coarsening(const ManufacturedCase& c, int n, int r, int steps) {
  ProblemSpec p = make_problem(c, n, r, steps, Scenario::refine_half, StudyConfig{});
  for (int k = 0; k <= steps; ++k) p.schedule[k] = 2 * k < steps ? 1 : 0;
  TransientOptions opts;
  opts.solver.tol = 1e-12;
  return backward_euler_run(p, opts);
}

ManufacturedCase scaled(const ManufacturedCase& c, double s) {
  ManufacturedCase out = c;
  const auto scale = [s](SpaceTimeFunction g) {
    return SpaceTimeFunction([g, s](double t, const Vec2& x) { return Vec2(s * g(t, x)); });
  };
  out.u = scale(c.u);
  out.u_t = scale(c.u_t);
  out.f = scale(c.f);
  return out;
}

IndicatorReport report_for(const ManufacturedCase& c, const TransientTrace& tr) {
  return total_bound(tr, c.material(), c.f, c.at(c.u, 0.0), c.at(c.u_t, 0.0));
}

}  // namespace

TEST(Indicators, ZeroProblemGivesZero) {
  const ManufacturedCase c = zero_case();
  for (Scenario sc : {Scenario::constant, Scenario::refine_half}) {
    const IndicatorReport r = report_for(c, run(c, 4, 1, 4, sc));
    for (double v : {r.zeta_mc, r.zeta_evo, r.zeta_osc, r.zeta_trec, r.zeta_sp1, r.zeta_sp2, r.zeta_sp3, r.zeta_ic,
                     r.total})
      EXPECT_EQ(v, 0.0);
  }
}

TEST(Indicators, TotalIsSumOfGroups) {
  const ManufacturedCase c = transient_sin_case();
  const IndicatorReport r = report_for(c, run_coarsening(c, 4, 1, 5));
  EXPECT_NEAR(r.zeta_sp, r.zeta_sp1 + r.zeta_sp2 + r.zeta_sp3, 1e-14 * r.zeta_sp);
  EXPECT_NEAR(r.zeta_tp, 2 * (r.zeta_mc + r.zeta_evo + r.zeta_osc + r.zeta_trec), 1e-14 * r.zeta_tp);
  EXPECT_NEAR(r.total, r.zeta_sp + r.zeta_tp + r.zeta_ic, 1e-14 * r.total);
  EXPECT_EQ(r.e_ip.size(), 6u);
  EXPECT_EQ(r.rows.size(), 6u);
  EXPECT_GT(r.zeta_mc, 1e-6);
  EXPECT_NEAR(r.zeta_sp1, std::sqrt(2.0) * r.e_ip[0], 1e-14 * r.zeta_sp1);
  EXPECT_NEAR(r.poincare, std::sqrt(2.0) / std::numbers::pi, 1e-15);
}

TEST(Indicators, ConstantMeshAndTimeIndependentData) {
  const ManufacturedCase c = stationary_sin_case();
  const TransientTrace tr = run(c, 4, 1, 5, Scenario::constant);
  EXPECT_EQ(zeta_mc(tr), 0.0);
  EXPECT_EQ(zeta_osc(tr, c.f), 0.0);
  std::vector<LevelRow> rows;
  IndicatorOptions opts;
  const SpatialIndicators sp = zeta_spatial(tr, c.material(), c.f, opts, &rows);
  for (int n = 1; n <= tr.steps; ++n) {
    EXPECT_EQ(rows[n].data_gap, 0.0);
    EXPECT_EQ(rows[n].data_gap_rate, 0.0);
  }
  EXPECT_GE(sp.sp3_alternative, 0.0);
}

TEST(Indicators, AlternativeSpatialTermIsSmaller) {
  const ManufacturedCase c = transient_sin_case();
  for (int steps : {5, 10}) {
    const IndicatorReport r = report_for(c, run(c, 4, 1, steps, Scenario::constant));
    EXPECT_GE(r.zeta_sp3_alternative, 0.0);
    EXPECT_LE(r.zeta_sp3_alternative, r.zeta_sp3);
  }
  EXPECT_LT(report_for(c, run(c, 4, 1, 4, Scenario::refine_half)).zeta_sp3_alternative, 0.0);
}

TEST(Indicators, EvolutionClosedForm) {
  const double tau = 0.3;
  const Vec2 cval(0.6, -0.8);  // |c| = 1
  const Rect dom{0, 0, 2, 1};
  const auto space = std::make_shared<const DgSpace>(std::make_shared<const Mesh>(build_structured(2, dom)), 1);
  MixedField dg = MixedField::zero(*space);
  dg.samples = sample(*space, [&](const Vec2&) { return cval; });
  const ReconstructionData d = ReconstructionData::from_differences(space, tau, {MixedField::zero(*space), dg},
                                                                    {MixedField::zero(*space), MixedField::zero(*space)});
  EXPECT_NEAR(zeta_evo(d, 5), tau * tau * tau / 3 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(zeta_evo(d, 7), zeta_evo(d, 5), 1e-15);
}

TEST(Indicators, TimeReconstructionClosedForm) {
  ProblemSpec p = make_problem(zero_case(), 2, 1, 1, Scenario::constant, StudyConfig{});
  p.final_time = 0.1;
  TransientTrace tr = prepare_trace(p);
  tr.times = {0.0, 0.1};
  tr.u = {DgField(tr.common), DgField(tr.common)};
  DgField v(tr.common);
  v.coeffs().setOnes();
  v.coeffs() /= v.coeffs().norm();
  tr.du = {DgField(tr.common), 0.1 * DgField(v)};
  EXPECT_NEAR(l2_norm(tr.ddu(1)), 1.0, 1e-14);
  const double expect = std::sqrt(3.0) * 0.01 / (2 * std::numbers::pi);
  EXPECT_NEAR(zeta_trec(tr), expect, 1e-15);
  EXPECT_NEAR(expect, 2.76e-3, 1e-5);
  tr.du[1] *= 2.0;
  EXPECT_NEAR(zeta_trec(tr), 2 * expect, 1e-15);
}

TEST(Indicators, Homogeneity) {
  const ManufacturedCase c = transient_sin_case();
  const IndicatorReport r1 = report_for(c, run_coarsening(c, 4, 1, 4));
  for (double s : {-2.0, 0.25}) {
    const ManufacturedCase cs = scaled(c, s);
    const IndicatorReport r2 = report_for(cs, run_coarsening(cs, 4, 1, 4));
    const std::pair<double, double> pairs[] = {{r1.zeta_mc, r2.zeta_mc},   {r1.zeta_evo, r2.zeta_evo},
                                               {r1.zeta_osc, r2.zeta_osc}, {r1.zeta_trec, r2.zeta_trec},
                                               {r1.zeta_sp, r2.zeta_sp},   {r1.zeta_ic, r2.zeta_ic},
                                               {r1.total, r2.total}};
    for (auto [a, b] : pairs) EXPECT_NEAR(b, std::abs(s) * a, 1e-7 * std::abs(s) * a + 1e-300);
  }
}

TEST(Indicators, DiscreteInitialDataHasNoInitialError) {
  // u0 and u1 are degree 4 polynomials vanishing on the boundary
  ManufacturedCase c = zero_case();
  const auto bubble = [](const Vec2& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  c.u = [&](double, const Vec2& x) { return Vec2(bubble(x), -2 * bubble(x)); };
  c.u_t = [&](double, const Vec2& x) { return Vec2(0.5 * bubble(x), bubble(x)); };
  const TransientTrace tr = backward_euler_run(make_problem(c, 2, 4, 2, Scenario::constant, StudyConfig{}));
  const IndicatorReport r = report_for(c, tr);
  EXPECT_LT(r.initial_displacement_error, 1e-14);
  EXPECT_LT(r.initial_velocity_error, 1e-14);
  EXPECT_LT(r.zeta_ic, 1e-13);
}

TEST(Indicators, McIsHomogeneousInTheTrace) {
  const ManufacturedCase c = transient_sin_case();
  TransientTrace tr = run_coarsening(c, 4, 1, 4);
  const double m1 = zeta_mc(tr);
  EXPECT_GT(m1, 1e-6);
  for (auto& du : tr.du) du *= -3.0;
  EXPECT_NEAR(zeta_mc(tr), 3.0 * m1, 1e-10 * m1);
}

TEST(Indicators, ErrorSamplingIsMonotone) {
  const ManufacturedCase c = transient_sin_case();
  const TransientTrace tr = run(c, 4, 1, 4, Scenario::constant);
  const double e3 = linf_l2_error(tr, c.u, 3), e5 = linf_l2_error(tr, c.u, 5), e9 = linf_l2_error(tr, c.u, 9);
  EXPECT_LE(e3, e5);
  EXPECT_LE(e5, e9);
}
