#include "dgelast/invariants.hpp"

#include "dgelast/indicators.hpp"
#include "dgelast/lagrange.hpp"
#include "dgelast/manufactured.hpp"
#include "dgelast/reconstruction.hpp"
#include "dgelast/studies.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace dgelast {

double measured_coercivity(const DgSpace& space, const SparseOperator& k, double alpha) {
  const DenseMatrix a = k.to_dense();
  const DenseMatrix g = assemble_dg_gram(space, alpha).to_dense();
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(0.5 * (a + a.transpose()), 0.5 * (g + g.transpose()),
                                                          Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double measured_continuity_ratio(const DgSpace& space, const SparseOperator& k, double alpha, int pairs,
                                 std::uint64_t seed) {
  const SparseOperator g = assemble_dg_gram(space, alpha);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int n = space.num_dofs();
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    Vector u(n), v(n);
    for (int i = 0; i < n; ++i) u[i] = nd(rng);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    const double num = std::abs(v.dot(k * u));
    const double den = std::sqrt(u.dot(g * u) * v.dot(g * v));
    worst = std::max(worst, num / den);
  }
  return worst;
}

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << std::scientific << x;
  return s.str();
}

InvariantResult check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  InvariantResult r{name, false, ""};
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<InvariantResult> run_invariant_checks(std::uint64_t seed) {
  std::vector<InvariantResult> out;
  const StiffnessTensor mat = StiffnessTensor::from_lame(1.0, 1.0);
  auto mesh = std::make_shared<const Mesh>(build_structured(2));
  auto space = std::make_shared<const DgSpace>(mesh, 1);
  const double c_inv = estimate_inverse_constant(*space);
  const PenaltyConfig pen = default_penalty(c_inv, mat);
  const SparseOperator k = assemble_ah(*space, mat, pen);

  out.push_back(check("stiffness symmetric", [&] {
    const double a = k.asymmetry();
    return std::pair{a <= 1e-13, "asymmetry " + fmt(a)};
  }));
  out.push_back(check("coercivity", [&] {
    const double lam = measured_coercivity(*space, k, pen.alpha);
    const double kappa = coercivity_constant(mat);
    return std::pair{lam >= kappa - 1e-8, "min eig " + fmt(lam) + " vs " + fmt(kappa)};
  }));
  out.push_back(check("continuity", [&] {
    const double ratio = measured_continuity_ratio(*space, k, pen.alpha, 100, seed);
    const double m = continuity_constant(pen.alpha, c_inv, mat);
    return std::pair{ratio <= m, "ratio " + fmt(ratio) + " vs " + fmt(m)};
  }));
  out.push_back(check("extended form equals a_h", [&] {
    const SparseOperator ka = assemble_extended_A(*space, mat, pen);
    const double d = ka.add(k, 1.0, -1.0).max_abs() / k.max_abs();
    return std::pair{d <= 1e-11, "relative max diff " + fmt(d)};
  }));
  out.push_back(check("lifting vanishes on continuous fields", [&] {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    DgField z(space);
    for (int i = 0; i < space->num_dofs(); ++i) z.coeffs()[i] = nd(rng);
    const DgField c = conforming_recovery(z);
    const double l = apply_lifting(*space, mat, c).norm();
    return std::pair{l <= 1e-12 * std::max(1.0, l2_norm(c)), "||L(v)|| " + fmt(l)};
  }));
  out.push_back(check("zero-mean remainder", [&] {
    const double tau = 0.1;
    const LineRule rule = gauss_legendre(3);
    double integral = 0.0, tj = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double t = 0.2 + rule.points[q] * tau;
      integral += rule.weights[q] * tau * eval_mu(3, t, tau);
      tj += rule.weights[q] * tau * (0.3 - t) * (3 * t - 0.4 - 0.3);
    }
    return std::pair{std::abs(integral) <= 1e-14 && std::abs(tj) <= 1e-14,
                     "int mu " + fmt(integral) + ", int (t^n-t)(3t-t^{n-1}-t^n) " + fmt(tj)};
  }));
  out.push_back(check("manufactured strong-form residual", [&] {
    double worst = 0.0;
    for (const char* name : {"transient_sin", "stationary_sin", "stationary_polynomial", "zero"})
      worst = std::max(worst, strong_form_residual(manufactured_case(name)));
    return std::pair{worst <= 1e-8, "max residual " + fmt(worst)};
  }));
  out.push_back(check("zero data gives zero everything", [&] {
    StudyConfig cfg;
    const TransientRun run = run_transient(zero_case(), 2, 1, 4, Scenario::refine_half, cfg, 1.0, true);
    const IndicatorReport& r = run.report;
    double m = run.error + r.total + r.zeta_sp + r.zeta_tp + r.zeta_ic;
    for (const DgField& u : run.trace->u) m += u.coeffs().lpNorm<Eigen::Infinity>();
    for (const DgField& u : run.trace->du) m += u.coeffs().lpNorm<Eigen::Infinity>();
    return std::pair{m == 0.0, "sum of magnitudes " + fmt(m)};
  }));
  out.push_back(check("constant mesh: zeta_MC = 0, constant f: zeta_osc = 0", [&] {
    ProblemSpec p;
    p.material = std::make_shared<const StiffnessTensor>(mat);
    p.f = [](double, const Vec2& x) { return Vec2(x.x() * x.y(), 1.0); };
    p.u0 = [](const Vec2& x) { return Vec2(std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()), 0.0); };
    p.u1 = [](const Vec2&) { return Vec2(0.0, 1.0); };
    p.steps = 4;
    p.family = std::make_shared<const MeshFamily>(build_structured(2));
    const TransientTrace tr = backward_euler_run(p);
    const double mc = zeta_mc(tr), osc = zeta_osc(tr, p.f);
    return std::pair{mc == 0.0 && osc == 0.0, "zeta_MC " + fmt(mc) + ", zeta_osc " + fmt(osc)};
  }));
  out.push_back(check("nested projection is idempotent", [&] {
    MeshFamily fam(build_structured(2));
    fam.refine({0, 3});
    auto coarse = std::make_shared<const DgSpace>(fam.mesh_ptr(0), 2);
    auto fine = std::make_shared<const DgSpace>(fam.mesh_ptr(1), 2);
    const DgField z = l2_project_function(fine, [](const Vec2& x) { return Vec2(std::exp(x.x()), x.y() * x.y()); });
    const DgField p1 = l2_project_cross_mesh(fam, z, coarse);
    const DgField p2 = l2_project_cross_mesh(fam, l2_project_cross_mesh(fam, p1, fine), coarse);
    const double d = (p2.coeffs() - p1.coeffs()).norm();
    return std::pair{d <= 1e-12, "difference " + fmt(d)};
  }));
  return out;
}

void print_invariant_results(std::ostream& out, const std::vector<InvariantResult>& results) {
  for (const InvariantResult& r : results)
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
}

}  // namespace dgelast
