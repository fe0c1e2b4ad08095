#pragma once

#include "dgelast/reconstruction.hpp"
#include "dgelast/stationary.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dgelast {

struct IndicatorOptions {
  EstimatorVariant variant = EstimatorVariant::duality;
  double calibration = 1.0;     // C multiplying every E_IP
  double poincare = 0.0;        // C_F; <= 0 means diam(domain) / pi
  bool stationary_alternative = false;  // use the constant-mesh form of zeta_sp3 in the total
  bool quadrature_check = false;        // also evaluate with doubled time quadrature orders
  /// Relative tolerance of the adaptive rule for the mesh-change integral
  /// (its integrand is the square root of a quartic in t).
  double mc_tolerance = 1e-12;
  int evo_points = 5;
  int osc_points = 4;
};

/// Per-level diagnostics (row n; interval quantities refer to (t^{n-1}, t^n]).
struct LevelRow {
  double time = 0.0;
  double e_ip = 0.0;
  double mc_integral = 0.0;   // int ||(I - Pi^n) d_t u_N||
  double mc_jump = 0.0;       // (t^N - t^n) ||(Pi^{n+1} - Pi^n) du^n||
  double evo_integral = 0.0;  // int ||G||
  double osc = 0.0;           // (1/2pi) (tau^3 int ||ftilde^n - f||^2)^{1/2}
  double trec = 0.0;          // (1/2pi) (3 tau^4)^{1/2} ||ddu^n||
  double data_gap = 0.0;      // ||ftilde^n - f^n||
  double data_gap_rate = 0.0; // ||df^n - dftilde^n||
  double e_ip_alt = 0.0;      // tau E_IP(du^n, dr^n) (constant mesh only)
};

struct IndicatorReport {
  double zeta_mc = 0.0, zeta_evo = 0.0, zeta_osc = 0.0, zeta_trec = 0.0;
  double zeta_sp1 = 0.0, zeta_sp2 = 0.0, zeta_sp3 = 0.0;
  double zeta_sp3_alternative = -1.0;  // < 0 when the schedule changes meshes
  double zeta_sp = 0.0, zeta_tp = 0.0, zeta_ic = 0.0, total = 0.0;
  double e_ip_initial_velocity = 0.0;  // E_IP(du^0, dg^0)
  double initial_displacement_error = 0.0, initial_velocity_error = 0.0;
  std::vector<double> e_ip;  // n = 0..N
  std::vector<LevelRow> rows;
  Vector final_eta;  // per-triangle indicators of the last level
  // quadrature drift (doubled orders minus default), when requested
  double evo_quadrature_drift = 0.0, mc_quadrature_drift = 0.0, osc_quadrature_drift = 0.0;
  double evo_7pt_difference = 0.0;  // always reported: 7-point minus 5-point zeta_evo
  // constants
  double poincare = 0.0, c_lower = 0.0, calibration = 1.0, alpha = 0.0, c_inv = 0.0;
  EstimatorVariant variant = EstimatorVariant::duality;
  bool used_alternative = false;
  std::string config_hash;
};

double zeta_mc(const TransientTrace& trace, double tolerance = 1e-12, std::vector<LevelRow>* rows = nullptr);
double zeta_evo(const ReconstructionData& data, int points = 5, std::vector<LevelRow>* rows = nullptr);
double zeta_osc(const TransientTrace& trace, const SpaceTimeFunction& f, int points = 4,
                std::vector<LevelRow>* rows = nullptr);
double zeta_trec(const TransientTrace& trace, std::vector<LevelRow>* rows = nullptr);

struct SpatialIndicators {
  double sp1 = 0.0, sp2 = 0.0, sp3 = 0.0, sp3_alternative = -1.0;
  std::vector<double> e_ip;
  double e_ip_initial_velocity = 0.0;
  Vector final_eta;
};

/// E_IP^n uses z = u^n and r = B^n u^n - Pi^n f^n + f^n on level n.
SpatialIndicators zeta_spatial(const TransientTrace& trace, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                               const IndicatorOptions& opts, std::vector<LevelRow>* rows = nullptr);

/// Every indicator plus the assembled bound zeta_sp + zeta_tp + zeta_IC.
IndicatorReport total_bound(const TransientTrace& trace, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                            const SpatialFunction& u0, const SpatialFunction& u1, const IndicatorOptions& opts = {});

/// One row per level.
void write_report_csv(std::ostream& out, const IndicatorReport& r);
void write_report_json(std::ostream& out, const IndicatorReport& r);

/// 64-bit FNV-1a of a text, as hex.
std::string fnv1a_hex(const std::string& text);

}  // namespace dgelast
