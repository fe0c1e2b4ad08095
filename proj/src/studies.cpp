#include "dgelast/studies.hpp"

#include "dgelast/lagrange.hpp"
#include "dgelast/reconstruction.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgelast {

namespace {

double penalty_alpha(const StudyConfig& cfg, double c_inv, const StiffnessTensor& mat) {
  if (cfg.penalty == "fixed") return cfg.penalty_value;
  return cfg.penalty_factor * alpha_min(c_inv, mat);
}

SolveOptions solver_options(const StudyConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.solver_tol;
  return o;
}

double safe_ratio(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

double observed_rate(double coarse, double fine, double h_coarse, double h_fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return 0.0;
  return std::log(coarse / fine) / std::log(h_coarse / h_fine);
}

StationaryRun run_stationary(const ManufacturedCase& c, int n, int degree, const StudyConfig& cfg,
                             bool keep_solution) {
  try {
    const StiffnessTensor mat = c.material();
    auto mesh = std::make_shared<const Mesh>(build_structured(n, c.domain));
    auto space = std::make_shared<const DgSpace>(mesh, degree);
    StationaryRun run;
    run.n = n;
    run.degree = degree;
    run.h = mesh->max_diameter();
    run.dofs = space->num_dofs();
    run.c_inv = estimate_inverse_constant(*space);
    run.alpha = penalty_alpha(cfg, run.c_inv, mat);
    const SpatialFunction f = c.at(c.f, 0.0);
    const DgField z = solve_stationary(space, mat, PenaltyConfig{run.alpha}, ResidualSource::from_function(f),
                                       solver_options(cfg));
    run.error = l2_distance(z, c.at(c.u, 0.0));
    const ResidualTerms terms = residual_terms(z, ResidualSource::from_function(f), mat);
    run.duality = combine_terms(*mesh, terms, EstimatorVariant::duality, 1.0, run.alpha);
    run.energy = combine_terms(*mesh, terms, EstimatorVariant::energy, 1.0, run.alpha);
    if (keep_solution) run.solution = z;
    return run;
  } catch (const std::exception& e) {
    throw std::runtime_error("stationary run (case " + c.name + ", n = " + std::to_string(n) +
                             ", r = " + std::to_string(degree) + ") failed: " + e.what());
  }
}

double fit_calibration(EstimatorVariant variant, int degree, const StudyConfig& cfg, int n) {
  const StationaryRun run = run_stationary(stationary_sin_case(cfg.lambda, cfg.mu), n, degree, cfg);
  const double raw = variant == EstimatorVariant::duality ? run.duality.value : run.energy.value;
  return safe_ratio(run.error, raw);
}

StationaryStudy run_stationary_study(const StudyConfig& cfg) {
  const ManufacturedCase c = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
  StationaryStudy s;
  s.config_hash = cfg.hash();
  for (int r : cfg.degrees) {
    std::vector<StationaryRun> runs;
    for (int n : cfg.mesh_sizes) runs.push_back(run_stationary(c, n, r, cfg));
    double cd = cfg.calibration, ce = cfg.calibration;
    if (cfg.calibration <= 0.0) {
      cd = safe_ratio(runs.front().error, runs.front().duality.value);
      ce = safe_ratio(runs.front().error, runs.front().energy.value);
      if (cd == 0.0) cd = 1.0;
      if (ce == 0.0) ce = 1.0;
    }
    s.calibration_duality.push_back(cd);
    s.calibration_energy.push_back(ce);
    for (size_t i = 0; i < runs.size(); ++i) {
      const StationaryRun& run = runs[i];
      StationaryRow row;
      row.n = run.n;
      row.degree = r;
      row.h = run.h;
      row.dofs = run.dofs;
      row.error = run.error;
      row.e_duality = cd * run.duality.value;
      row.e_energy = ce * run.energy.value;
      row.eff_duality = safe_ratio(row.e_duality, row.error);
      row.eff_energy = safe_ratio(row.e_energy, row.error);
      if (i > 0) {
        const StationaryRow& prev = s.rows.back();
        row.rate_error = observed_rate(prev.error, row.error, prev.h, row.h);
        row.rate_duality = observed_rate(prev.e_duality, row.e_duality, prev.h, row.h);
        row.rate_energy = observed_rate(prev.e_energy, row.e_energy, prev.h, row.h);
      }
      s.rows.push_back(row);
    }
  }
  return s;
}

void write_stationary_csv(std::ostream& out, const StationaryStudy& s) {
  std::ostringstream o;
  o << std::setprecision(10);
  o << "# config_hash " << s.config_hash << "\n";
  o << "n,degree,h,dofs,error,E_duality,E_energy,eff_duality,eff_energy,rate_error,rate_duality,rate_energy\n";
  for (const StationaryRow& r : s.rows)
    o << r.n << "," << r.degree << "," << r.h << "," << r.dofs << "," << r.error << "," << r.e_duality << ","
      << r.e_energy << "," << r.eff_duality << "," << r.eff_energy << "," << r.rate_error << "," << r.rate_duality
      << "," << r.rate_energy << "\n";
  out << o.str();
}

const char* to_string(Scenario s) { return s == Scenario::constant ? "constant" : "refine_half"; }

ProblemSpec make_problem(const ManufacturedCase& c, int n, int degree, int steps, Scenario scenario,
                         const StudyConfig& cfg) {
  ProblemSpec p;
  p.material = std::make_shared<const StiffnessTensor>(c.material());
  p.f = c.f;
  p.u0 = c.at(c.u, 0.0);
  p.u1 = c.at(c.u_t, 0.0);
  p.final_time = cfg.final_time;
  p.steps = steps;
  p.degree = degree;
  if (scenario == Scenario::constant) {
    p.family = std::make_shared<const MeshFamily>(build_structured(n, c.domain));
  } else {
    if (n % 2 != 0) throw std::invalid_argument("refine_half scenario needs an even mesh size");
    auto family = std::make_shared<MeshFamily>(build_structured(n / 2, c.domain));
    family->refine_uniform();
    p.family = family;
    p.schedule.resize(steps + 1);
    for (int k = 0; k <= steps; ++k) p.schedule[k] = 2 * k < steps ? 0 : 1;
  }
  if (cfg.penalty == "fixed") {
    p.alpha = cfg.penalty_value;
  } else if (cfg.penalty_factor != 2.0) {
    p.alpha = penalty_alpha(cfg, prepare_trace(p).c_inv, *p.material);
  }
  return p;
}

TransientRun run_transient(const ManufacturedCase& c, int n, int degree, int steps, Scenario scenario,
                           const StudyConfig& cfg, double calibration, bool keep_trace) {
  try {
    const ProblemSpec p = make_problem(c, n, degree, steps, scenario, cfg);
    TransientOptions topts;
    topts.solver = solver_options(cfg);
    TransientTrace tr = backward_euler_run(p, topts);
    TransientRun run;
    run.scenario = scenario;
    run.n = n;
    run.degree = degree;
    run.steps = steps;
    run.tau = p.tau();
    run.error = linf_l2_error(tr, c.u);
    IndicatorOptions io;
    io.variant = cfg.estimator;
    io.calibration = calibration;
    io.poincare = cfg.poincare;
    io.stationary_alternative = cfg.stationary_alternative;
    io.quadrature_check = cfg.quadrature_check;
    run.report = total_bound(tr, *p.material, p.f, p.u0, p.u1, io);
    run.report.config_hash = cfg.hash();
    if (keep_trace) run.trace = std::move(tr);
    return run;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("transient run (case ") + c.name + ", " + to_string(scenario) +
                             ", n = " + std::to_string(n) + ", r = " + std::to_string(degree) +
                             ", N = " + std::to_string(steps) + ") failed: " + e.what());
  }
}

TransientStudy run_transient_study(const StudyConfig& cfg) {
  const ManufacturedCase c = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
  std::vector<Scenario> scenarios;
  if (cfg.scenario != "refine_half") scenarios.push_back(Scenario::constant);
  if (cfg.scenario != "constant") scenarios.push_back(Scenario::refine_half);
  TransientStudy s;
  s.config_hash = cfg.hash();
  for (int r : cfg.degrees) {
    const double cal = cfg.calibration > 0.0 ? cfg.calibration : fit_calibration(cfg.estimator, r, cfg);
    s.calibration.push_back(cal);
    for (Scenario sc : scenarios)
      for (int n : cfg.mesh_sizes)
        for (size_t i = 0; i < cfg.steps.size(); ++i) {
          const TransientRun run = run_transient(c, n, r, cfg.steps[i], sc, cfg, cal);
          TransientRow row;
          row.scenario = sc;
          row.n = n;
          row.degree = r;
          row.steps = run.steps;
          row.tau = run.tau;
          row.error = run.error;
          row.zeta_sp = run.report.zeta_sp;
          row.zeta_tp = run.report.zeta_tp;
          row.zeta_ic = run.report.zeta_ic;
          row.total = run.report.total;
          row.zeta_mc = run.report.zeta_mc;
          row.zeta_evo = run.report.zeta_evo;
          row.zeta_osc = run.report.zeta_osc;
          row.zeta_trec = run.report.zeta_trec;
          row.effectivity = safe_ratio(row.total, row.error);
          if (i > 0) {
            const TransientRow& prev = s.rows.back();
            row.rate_error = observed_rate(prev.error, row.error, prev.tau, row.tau);
            row.rate_tp = observed_rate(prev.zeta_tp, row.zeta_tp, prev.tau, row.tau);
          }
          s.rows.push_back(row);
        }
  }
  return s;
}

void write_transient_csv(std::ostream& out, const TransientStudy& s) {
  std::ostringstream o;
  o << std::setprecision(10);
  o << "# config_hash " << s.config_hash << "\n";
  o << "scenario,n,degree,steps,tau,error,zeta_sp,zeta_tp,zeta_ic,total,zeta_mc,zeta_evo,zeta_osc,zeta_trec,"
       "effectivity,rate_error,rate_tp\n";
  for (const TransientRow& r : s.rows)
    o << to_string(r.scenario) << "," << r.n << "," << r.degree << "," << r.steps << "," << r.tau << "," << r.error
      << "," << r.zeta_sp << "," << r.zeta_tp << "," << r.zeta_ic << "," << r.total << "," << r.zeta_mc << ","
      << r.zeta_evo << "," << r.zeta_osc << "," << r.zeta_trec << "," << r.effectivity << "," << r.rate_error << ","
      << r.rate_tp << "\n";
  out << o.str();
}

double reference_gap(const DgField& z, const StiffnessTensor& mat, const std::optional<DgField>& discrete,
                     const SpatialFunction& smooth, int refinements, int max_dofs) {
  const Mesh& base = z.space().mesh();
  std::vector<int> ancestors(base.num_triangles());
  for (int k = 0; k < base.num_triangles(); ++k) ancestors[k] = k;
  auto fine = std::make_shared<Mesh>(base);
  for (int i = 0; i < refinements; ++i) {
    Mesh next = refine_uniform(*fine);
    std::vector<int> a(next.num_triangles());
    for (int k = 0; k < next.num_triangles(); ++k) a[k] = ancestors[next.parent(k)];
    ancestors = std::move(a);
    fine = std::make_shared<Mesh>(std::move(next));
  }
  const LagrangeSpace ls(fine, z.space().degree() + 1);
  const ElementFunction g = [&](int k, const Vec2& x) {
    Vec2 v = smooth ? smooth(x) : Vec2(0.0, 0.0);
    if (discrete) v += discrete->value(ancestors[k], x);
    return v;
  };
  const Vector w = solve_conforming_elasticity(ls, mat, g, 1e-11, max_dofs);
  return conforming_dg_distance(ls, w, ancestors, z);
}

std::vector<double> oracle_reconstruction_gap(const TransientTrace& trace, const StiffnessTensor& mat,
                                              const SpaceTimeFunction& f, int refinements, int max_dofs) {
  std::vector<double> gaps(trace.steps + 1);
  std::map<int, SparseOperator> stiff;
  for (int n = 0; n <= trace.steps; ++n) {
    const int member = trace.schedule[n];
    if (!stiff.count(member)) stiff.emplace(member, level_stiffness(trace, mat, member));
    const double t = trace.times[n];
    const SpatialFunction fn = [&f, t](const Vec2& x) { return f(t, x); };
    const SpacePtr& sp = trace.level_space(n);
    DgField d(sp, stiff.at(member) * trace.u[n].coeffs() - l2_project_function(sp, fn).coeffs());
    gaps[n] = reference_gap(trace.u[n], mat, d, fn, refinements, max_dofs);
  }
  return gaps;
}

}  // namespace dgelast
