#pragma once

#include "dgelast/config.hpp"
#include "dgelast/indicators.hpp"
#include "dgelast/manufactured.hpp"
#include "dgelast/transient.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgelast {

/// One stationary solve with both estimators at calibration 1.
struct StationaryRun {
  int n = 0, degree = 1;
  double h = 0.0;
  int dofs = 0;
  double alpha = 0.0, c_inv = 0.0;
  double error = 0.0;  // ||u - z_h||
  EstimatorBreakdown duality, energy;
  std::optional<DgField> solution;
};

/// Structured n x n mesh of the case domain, penalty from the config.
StationaryRun run_stationary(const ManufacturedCase& c, int n, int degree, const StudyConfig& cfg,
                             bool keep_solution = false);

struct StationaryRow {
  int n = 0, degree = 1;
  double h = 0.0;
  int dofs = 0;
  double error = 0.0, e_duality = 0.0, e_energy = 0.0;  // estimators include the calibration
  double eff_duality = 0.0, eff_energy = 0.0;
  double rate_error = 0.0, rate_duality = 0.0, rate_energy = 0.0;  // 0 on the first row of a degree
};

struct StationaryStudy {
  std::vector<StationaryRow> rows;
  /// Per degree, fitted on the coarsest mesh unless the config fixes it.
  std::vector<double> calibration_duality, calibration_energy;
  std::string config_hash;
};

/// log2 of successive ratios (mesh sizes doubling).
double observed_rate(double coarse, double fine, double h_coarse, double h_fine);

StationaryStudy run_stationary_study(const StudyConfig& cfg);
void write_stationary_csv(std::ostream& out, const StationaryStudy& s);

/// C = ||e|| / E on the stationary sin case with an n x n mesh.
double fit_calibration(EstimatorVariant variant, int degree, const StudyConfig& cfg, int n = 4);

/// Mesh schedule for a transient run.
enum class Scenario { constant, refine_half };
const char* to_string(Scenario s);

struct TransientRun {
  Scenario scenario = Scenario::constant;
  int n = 0, degree = 1, steps = 0;
  double tau = 0.0;
  double error = 0.0;  // max ||u_N - u|| over sampled times
  IndicatorReport report;
  std::optional<TransientTrace> trace;
};

/// constant: n x n mesh throughout. refine_half: (n/2) x (n/2) mesh for
/// t < T/2, its uniform refinement afterwards (n must be even).
ProblemSpec make_problem(const ManufacturedCase& c, int n, int degree, int steps, Scenario scenario,
                         const StudyConfig& cfg);

TransientRun run_transient(const ManufacturedCase& c, int n, int degree, int steps, Scenario scenario,
                           const StudyConfig& cfg, double calibration, bool keep_trace = false);

struct TransientRow {
  Scenario scenario = Scenario::constant;
  int n = 0, degree = 1, steps = 0;
  double tau = 0.0, error = 0.0;
  double zeta_sp = 0.0, zeta_tp = 0.0, zeta_ic = 0.0, total = 0.0;
  double zeta_mc = 0.0, zeta_evo = 0.0, zeta_osc = 0.0, zeta_trec = 0.0;
  double effectivity = 0.0;
  double rate_error = 0.0, rate_tp = 0.0;  // in tau; 0 on the first row of a group
};

struct TransientStudy {
  std::vector<TransientRow> rows;
  std::vector<double> calibration;  // per degree
  std::string config_hash;
};

TransientStudy run_transient_study(const StudyConfig& cfg);
void write_transient_csv(std::ostream& out, const TransientStudy& s);

/// ||w_ref - z|| where w_ref is a conforming degree r+1 solve of
/// a(w, v) = (g, v) on `refinements` uniform refinements of z's mesh.
/// `discrete` (optional) is a DG field on z's mesh added to the smooth g.
double reference_gap(const DgField& z, const StiffnessTensor& mat, const std::optional<DgField>& discrete,
                     const SpatialFunction& smooth, int refinements = 2, int max_dofs = 400000);

/// Per level n: ||w^n_ref - u^n|| with a(w^n, v) = (B^n u^n - Pi^n f^n + f^n, v).
std::vector<double> oracle_reconstruction_gap(const TransientTrace& trace, const StiffnessTensor& mat,
                                              const SpaceTimeFunction& f, int refinements = 2,
                                              int max_dofs = 400000);

}  // namespace dgelast
