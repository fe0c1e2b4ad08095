#pragma once

#include "dgelast/material.hpp"
#include "dgelast/transient.hpp"

#include <optional>
#include <vector>

namespace dgelast {

/// u_N and its first two time derivatives at one time.
struct TimeReconstruction {
  DgField value, first, second;
};

/// Interval containing t: the n with t in (t^{n-1}, t^n] (n = 1 at t = 0).
int interval_of(const TransientTrace& trace, double t);

/// u_N(t) = (s/tau) u^n + ((tau-s)/tau) u^{n-1} - s (tau-s)^2 / tau ddu^n,
/// s = t - t^{n-1}, on the common space.
TimeReconstruction eval_uN(const TransientTrace& trace, double t);
/// Same on a prescribed interval; t may be either end point.
TimeReconstruction eval_uN_interval(const TransientTrace& trace, int n, double t);

/// mu^n(t) = -(6 / tau) (t - (t^{n-1} + t^n) / 2).
double eval_mu(int n, double t, double tau);

/// Function on the common space: DG coefficients plus samples of a smooth
/// part at every volume quadrature point (element-major).
struct MixedField {
  Vector coeffs;
  Eigen::MatrixX2d samples;

  static MixedField zero(const DgSpace& space);
  MixedField& operator+=(const MixedField& o);
  MixedField& operator-=(const MixedField& o);
  MixedField& operator*=(double s);
  friend MixedField operator+(MixedField a, const MixedField& b) { return a += b; }
  friend MixedField operator-(MixedField a, const MixedField& b) { return a -= b; }
  friend MixedField operator*(double s, MixedField a) { return a *= s; }
};

/// Total values at all volume quadrature points.
Eigen::MatrixX2d qp_values(const DgSpace& space, const MixedField& f);
/// Samples of a smooth function at all volume quadrature points.
Eigen::MatrixX2d sample(const DgSpace& space, const SpatialFunction& f);
double l2_inner(const DgSpace& space, const MixedField& a, const MixedField& b);
double l2_norm(const DgSpace& space, const MixedField& a);

/// 4-point Gauss time average of f over (a, b), arranged so that a
/// time-independent f returns f(b) exactly.
Vec2 time_average(const SpaceTimeFunction& f, double a, double b, const Vec2& x, int points = 4);

struct ReconstructionData {
  SpacePtr common;
  double tau = 0.0;
  int steps = 0;
  /// Gram matrix of (dg^n, ddg^n, gamma_n), indexed by n = 1..N (entry 0 unused).
  std::vector<Eigen::Matrix3d> gram;
  /// Kept only when requested; indexed by n (g from 0, others from 1).
  std::vector<MixedField> g, dg, ddg, gamma;
  std::optional<MixedField> dg0;

  bool has_fields() const { return !gamma.empty(); }

  /// Builds gamma_n and the Grams from given differences (dg, ddg indexed
  /// 1..N, entry 0 ignored).
  static ReconstructionData from_differences(SpacePtr common, double tau, std::vector<MixedField> dg,
                                             std::vector<MixedField> ddg);
};

/// g^n = B^n u^n - Pi^n f^n + ftilde^n (ftilde^0 = f(0)),
/// dg^0 = B^0 du^0 - Pi^0 f^0 + f^0, differences by backward quotients and
/// gamma_n = gamma_{n-1} + tau^2/2 dg^n + tau^3/12 ddg^n.
ReconstructionData build_g_series(const TransientTrace& trace, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                                  bool keep_fields = false);

/// Coefficients (a, b, c) with G^n(t) = a dg^n + b ddg^n + c gamma_n.
Eigen::Vector3d G_coefficients(int n, double t, double tau);
/// d/dt of the coefficients.
Eigen::Vector3d G_coefficients_derivative(int n, double t, double tau);
/// G^n(t); requires stored fields.
MixedField eval_G(const ReconstructionData& data, int n, double t);
/// ||G^n(t)|| from the level Gram.
double G_norm(const ReconstructionData& data, int n, double t);

/// max over levels and `samples` equispaced points per interval of
/// ||u_N(t) - u(t)||.
double linf_l2_error(const TransientTrace& trace, const SpaceTimeFunction& u, int samples = 5);

}  // namespace dgelast
