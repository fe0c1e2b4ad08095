#pragma once

#include "dgelast/assembly.hpp"
#include "dgelast/linsolve.hpp"

#include <optional>

namespace dgelast {

/// Right-hand side made of an optional discrete part (living on the
/// solution space) plus an optional smooth callable.
struct ResidualSource {
  std::optional<DgField> discrete;
  SpatialFunction smooth;

  static ResidualSource from_function(SpatialFunction f) { return {std::nullopt, std::move(f)}; }

  /// Value at volume quadrature point q of triangle k of `space`.
  Vec2 value_qp(const DgSpace& space, int k, int q) const;
  /// (r, phi) for every dof of `space`.
  Vector moments(const SpacePtr& space) const;
};

enum class EstimatorVariant { duality, energy };

const char* to_string(EstimatorVariant v);
EstimatorVariant estimator_variant_from_string(const std::string& s);

/// Unweighted local quantities the estimators are built from.
struct ResidualTerms {
  Vector volume;         // ||r + div sigma(z)||_K^2
  Vector stress_jump;    // ||[sigma(z) nu]||_e^2 on interior faces, 0 on the boundary
  Vector solution_jump;  // ||[z]||_e^2
};

struct EstimatorBreakdown {
  EstimatorVariant variant = EstimatorVariant::duality;
  double value = 0.0;
  Vector eta;                  // per triangle; value^2 = sum eta^2
  double volume = 0.0;         // weighted group sums of squares, C included
  double stress_jump = 0.0;
  double solution_jump = 0.0;
};

ResidualTerms residual_terms(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat);

/// Weights h^4 / hface^3 / hface (duality) or h^2 / hface / (hface +
/// alpha/hface) (energy); interior face contributions are split evenly
/// between the two neighbours in eta.
EstimatorBreakdown combine_terms(const Mesh& mesh, const ResidualTerms& t, EstimatorVariant variant, double c,
                                 double alpha);

EstimatorBreakdown estimate_duality(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat,
                                    double c = 1.0);
EstimatorBreakdown estimate_energy(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat, double c,
                                   double alpha);

/// a_h(z_h, v) = (r, v) for all v.
DgField solve_stationary(const SpacePtr& space, const StiffnessTensor& mat, const PenaltyConfig& penalty,
                         const ResidualSource& r, const SolveOptions& opts = {});
DgField solve_stationary(const SpacePtr& space, const SparseOperator& k, const ResidualSource& r,
                         const SolveOptions& opts = {});

/// div sigma(z) at volume quadrature point q of triangle k.
Vec2 divergence_of_stress(const DgField& z, const StiffnessTensor& mat, int k, int q);
/// sigma(z) nu on the given side of face e at edge quadrature point q.
Vec2 face_traction(const DgField& z, const StiffnessTensor& mat, int e, bool plus_side, int q);

}  // namespace dgelast
