#include "dgelast/stationary.hpp"

#include <cmath>

namespace dgelast {

Vec2 ResidualSource::value_qp(const DgSpace& space, int k, int q) const {
  Vec2 v = Vec2::Zero();
  if (discrete) {
    if (&discrete->space() != &space) throw IncompatibleError("ResidualSource: discrete part lives on another space");
    v += discrete->value_qp(k, q);
  }
  if (smooth) v += smooth(space.quad_point(k, q));
  return v;
}

Vector ResidualSource::moments(const SpacePtr& space) const {
  Vector m = Vector::Zero(space->num_dofs());
  if (discrete) {
    if (discrete->space_ptr() != space) throw IncompatibleError("ResidualSource: discrete part lives on another space");
    m += discrete->coeffs();
  }
  if (smooth) m += l2_project_function(space, smooth).coeffs();
  return m;
}

const char* to_string(EstimatorVariant v) { return v == EstimatorVariant::duality ? "duality" : "energy"; }

EstimatorVariant estimator_variant_from_string(const std::string& s) {
  if (s == "duality") return EstimatorVariant::duality;
  if (s == "energy") return EstimatorVariant::energy;
  throw std::invalid_argument("unknown estimator variant '" + s + "'");
}

Vec2 divergence_of_stress(const DgField& z, const StiffnessTensor& mat, int k, int q) {
  const DgSpace& sp = z.space();
  const Eigen::MatrixX3d h = sp.hessians(k, q);
  // second derivatives of each displacement component: (xx, xy, yy)
  const Eigen::RowVector3d d0 = z.block(k, 0).transpose() * h;
  const Eigen::RowVector3d d1 = z.block(k, 1).transpose() * h;
  const double r = 1.0 / std::sqrt(2.0);
  // x- and y-derivatives of the Mandel strain
  const Mandel ex(d0[0], d1[1], r * (d0[1] + d1[0]));
  const Mandel ey(d0[1], d1[2], r * (d0[2] + d1[1]));
  const MandelMatrix& c = mat.matrix(sp.mesh().material(k));
  const Mandel sx = c * ex, sy = c * ey;
  return Vec2(sx[0] + r * sy[2], r * sx[2] + sy[1]);
}

Vec2 face_traction(const DgField& z, const StiffnessTensor& mat, int e, bool plus_side, int q) {
  const DgSpace& sp = z.space();
  const Face& f = sp.mesh().face(e);
  const int k = plus_side ? f.plus : f.minus;
  const int j = plus_side ? f.plus_local : f.minus_local;
  const Eigen::MatrixX2d g = sp.edge_gradients(k, j, !plus_side, q);
  Mat2 grad;
  grad.row(0) = z.block(k, 0).transpose() * g;
  grad.row(1) = z.block(k, 1).transpose() * g;
  const Mat2 eps = 0.5 * (grad + grad.transpose());
  return mat.stress(sp.mesh().material(k), eps) * f.normal;
}

ResidualTerms residual_terms(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat) {
  const DgSpace& sp = z.space();
  const Mesh& mesh = sp.mesh();
  ResidualTerms t;
  t.volume.resize(mesh.num_triangles());
  t.stress_jump.resize(mesh.num_faces());
  t.solution_jump.resize(mesh.num_faces());
  parallel_for(mesh.num_triangles(), [&](int k) {
    double s = 0.0;
    for (int q = 0; q < sp.volume_rule().size(); ++q)
      s += sp.quad_weight(k, q) * (r.value_qp(sp, k, q) + divergence_of_stress(z, mat, k, q)).squaredNorm();
    t.volume[k] = s;
  });
  parallel_for(mesh.num_faces(), [&](int e) {
    const Face& f = mesh.face(e);
    t.solution_jump[e] = face_jump_squared(z, e);
    double s = 0.0;
    if (!f.boundary())
      for (int q = 0; q < sp.edge_rule().size(); ++q) {
        const Vec2 j = face_traction(z, mat, e, true, q) - face_traction(z, mat, e, false, q);
        s += sp.edge_rule().weights[q] * f.length * j.squaredNorm();
      }
    t.stress_jump[e] = s;
  });
  return t;
}

EstimatorBreakdown combine_terms(const Mesh& mesh, const ResidualTerms& t, EstimatorVariant variant, double c,
                                 double alpha) {
  EstimatorBreakdown b;
  b.variant = variant;
  Vector eta2 = Vector::Zero(mesh.num_triangles());
  const bool dual = variant == EstimatorVariant::duality;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double h = mesh.diameter(k);
    const double v = (dual ? h * h * h * h : h * h) * t.volume[k];
    eta2[k] += v;
    b.volume += v;
  }
  for (int e = 0; e < mesh.num_faces(); ++e) {
    const Face& f = mesh.face(e);
    const double hf = f.hface;
    const double sj = (dual ? hf * hf * hf : hf) * t.stress_jump[e];
    const double uj = (dual ? hf : hf + alpha / hf) * t.solution_jump[e];
    b.stress_jump += sj;
    b.solution_jump += uj;
    if (f.boundary()) {
      eta2[f.plus] += sj + uj;
    } else {
      eta2[f.plus] += 0.5 * (sj + uj);
      eta2[f.minus] += 0.5 * (sj + uj);
    }
  }
  const double c2 = c * c;
  b.volume *= c2;
  b.stress_jump *= c2;
  b.solution_jump *= c2;
  b.eta = (c2 * eta2).cwiseSqrt();
  b.value = std::sqrt(b.volume + b.stress_jump + b.solution_jump);
  return b;
}

EstimatorBreakdown estimate_duality(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat, double c) {
  return combine_terms(z.space().mesh(), residual_terms(z, r, mat), EstimatorVariant::duality, c, 0.0);
}

EstimatorBreakdown estimate_energy(const DgField& z, const ResidualSource& r, const StiffnessTensor& mat, double c,
                                   double alpha) {
  return combine_terms(z.space().mesh(), residual_terms(z, r, mat), EstimatorVariant::energy, c, alpha);
}

DgField solve_stationary(const SpacePtr& space, const SparseOperator& k, const ResidualSource& r,
                         const SolveOptions& opts) {
  SolveOptions o = opts;
  if (o.block_size == 0) o.block_size = space->element_dofs();
  return DgField(space, solve_spd(k, r.moments(space), o).x);
}

DgField solve_stationary(const SpacePtr& space, const StiffnessTensor& mat, const PenaltyConfig& penalty,
                         const ResidualSource& r, const SolveOptions& opts) {
  return solve_stationary(space, assemble_ah(*space, mat, penalty), r, opts);
}

}  // namespace dgelast
