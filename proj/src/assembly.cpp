#include "dgelast/assembly.hpp"

#include <cmath>

namespace dgelast {

namespace {

using StrainMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

// Traction (sigma nu) of every vector basis function, 2 x (2 nb).
Eigen::Matrix<double, 2, Eigen::Dynamic> tractions(const MandelMatrix& c, const Eigen::MatrixX2d& grads,
                                                   const Vec2& nu) {
  const StrainMatrix s = c * DgSpace::strain_matrix(grads);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix<double, 2, Eigen::Dynamic> t(2, s.cols());
  t.row(0) = s.row(0) * nu.x() + r * s.row(2) * nu.y();
  t.row(1) = r * s.row(2) * nu.x() + s.row(1) * nu.y();
  return t;
}

// Jump traces of the dofs of both sides: 2 x (4 nb), plus side first.
Eigen::Matrix<double, 2, Eigen::Dynamic> jump_traces(const Vector& pp, const Vector* pm) {
  const int nb = static_cast<int>(pp.size());
  Eigen::Matrix<double, 2, Eigen::Dynamic> j = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, 4 * nb);
  j.block(0, 0, 1, nb) = pp.transpose();
  j.block(1, nb, 1, nb) = pp.transpose();
  if (pm) {
    j.block(0, 2 * nb, 1, nb) = -pm->transpose();
    j.block(1, 3 * nb, 1, nb) = -pm->transpose();
  }
  return j;
}

DenseMatrix volume_block(const DgSpace& sp, int k, const MandelMatrix& c) {
  const int n = sp.element_dofs();
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (int q = 0; q < sp.volume_rule().size(); ++q) {
    const StrainMatrix s = DgSpace::strain_matrix(sp.gradients(k, q));
    a.noalias() += sp.quad_weight(k, q) * s.transpose() * c * s;
  }
  return a;
}

// Face matrix over [plus dofs, minus dofs]; consistency and/or penalty part.
DenseMatrix face_block(const DgSpace& sp, const StiffnessTensor* mat, int e, double pen) {
  const Mesh& mesh = sp.mesh();
  const Face& f = mesh.face(e);
  const int nb = sp.scalar_size();
  const bool inner = !f.boundary();
  const double avg = inner ? 0.5 : 1.0;
  DenseMatrix a = DenseMatrix::Zero(4 * nb, 4 * nb);
  for (int q = 0; q < sp.edge_rule().size(); ++q) {
    const double w = sp.edge_rule().weights[q] * f.length;
    const Vector pp = sp.edge_values(f.plus, f.plus_local, false, q);
    Vector pm;
    if (inner) pm = sp.edge_values(f.minus, f.minus_local, true, q);
    const auto jmp = jump_traces(pp, inner ? &pm : nullptr);
    if (pen != 0.0) a.noalias() += (w * pen) * jmp.transpose() * jmp;
    if (mat) {
      Eigen::Matrix<double, 2, Eigen::Dynamic> t = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, 4 * nb);
      t.leftCols(2 * nb) =
          avg * tractions(mat->matrix(mesh.material(f.plus)), sp.edge_gradients(f.plus, f.plus_local, false, q), f.normal);
      if (inner)
        t.rightCols(2 * nb) = avg * tractions(mat->matrix(mesh.material(f.minus)),
                                              sp.edge_gradients(f.minus, f.minus_local, true, q), f.normal);
      const DenseMatrix jt = jmp.transpose() * t;
      a.noalias() -= w * (jt + jt.transpose());
    }
  }
  return a;
}

void scatter_face(BlockSparseBuilder& b, const Face& f, const DenseMatrix& a, int n) {
  b.add(f.plus, f.plus, a.topLeftCorner(n, n));
  if (!f.boundary()) {
    b.add(f.plus, f.minus, a.topRightCorner(n, n));
    b.add(f.minus, f.plus, a.bottomLeftCorner(n, n));
    b.add(f.minus, f.minus, a.bottomRightCorner(n, n));
  }
}

SparseOperator assemble_form(const DgSpace& sp, const StiffnessTensor* vol_mat, bool identity_volume,
                             const StiffnessTensor* face_mat, double alpha) {
  const Mesh& mesh = sp.mesh();
  const int n = sp.element_dofs();
  BlockSparseBuilder b(mesh.num_triangles(), n, mesh.num_triangles(), n, element_pattern(mesh));
  if (vol_mat || identity_volume) {
    std::vector<DenseMatrix> blocks(mesh.num_triangles());
    parallel_for(mesh.num_triangles(), [&](int k) {
      blocks[k] = volume_block(sp, k, vol_mat ? vol_mat->matrix(mesh.material(k)) : MandelMatrix::Identity());
    });
    for (int k = 0; k < mesh.num_triangles(); ++k) b.add(k, k, blocks[k]);
  }
  if (face_mat || alpha != 0.0) {
    std::vector<DenseMatrix> blocks(mesh.num_faces());
    parallel_for(mesh.num_faces(), [&](int e) {
      const double pen = alpha / mesh.face(e).hface;
      blocks[e] = face_block(sp, face_mat, e, pen);
    });
    for (int e = 0; e < mesh.num_faces(); ++e) scatter_face(b, mesh.face(e), blocks[e], n);
  }
  return b.build();
}

}  // namespace

SparseOperator assemble_ah(const DgSpace& space, const StiffnessTensor& mat, const PenaltyConfig& penalty) {
  if (!(penalty.alpha > 0.0)) throw std::invalid_argument("assemble_ah: penalty must be positive");
  return assemble_form(space, &mat, false, &mat, penalty.alpha);
}

SparseOperator assemble_volume(const DgSpace& space, const StiffnessTensor& mat) {
  return assemble_form(space, &mat, false, nullptr, 0.0);
}

SparseOperator assemble_penalty(const DgSpace& space, double alpha) {
  return assemble_form(space, nullptr, false, nullptr, alpha);
}

SparseOperator assemble_dg_gram(const DgSpace& space, double alpha) {
  return assemble_form(space, nullptr, true, nullptr, alpha);
}

int tensor_dofs(const DgSpace& space) { return 3 * space.num_elements() * space.scalar_size(); }

SparseOperator assemble_lifting(const DgSpace& sp, const StiffnessTensor& mat) {
  const Mesh& mesh = sp.mesh();
  const int nb = sp.scalar_size();
  BlockSparseBuilder b(mesh.num_triangles(), 3 * nb, mesh.num_triangles(), 2 * nb, element_pattern(mesh));
  // per face: rows of the plus element then the minus element, columns [plus, minus]
  std::vector<DenseMatrix> blocks(mesh.num_faces());
  parallel_for(mesh.num_faces(), [&](int e) {
    const Face& f = mesh.face(e);
    const bool inner = !f.boundary();
    const double avg = inner ? 0.5 : 1.0;
    DenseMatrix a = DenseMatrix::Zero(6 * nb, 4 * nb);
    const int sides = inner ? 2 : 1;
    for (int q = 0; q < sp.edge_rule().size(); ++q) {
      const double w = sp.edge_rule().weights[q] * f.length;
      const Vector pp = sp.edge_values(f.plus, f.plus_local, false, q);
      Vector pm;
      if (inner) pm = sp.edge_values(f.minus, f.minus_local, true, q);
      const auto jmp = jump_traces(pp, inner ? &pm : nullptr);
      for (int s = 0; s < sides; ++s) {
        const int k = s == 0 ? f.plus : f.minus;
        const Vector& phi = s == 0 ? pp : pm;
        const MandelMatrix& c = mat.matrix(mesh.material(k));
        for (int m = 0; m < 3; ++m) {
          const Vec2 traction = dgelast::from_mandel(c.col(m)) * f.normal;
          const Eigen::RowVectorXd row = (w * avg) * traction.transpose() * jmp;
          a.block(s * 3 * nb + m * nb, 0, nb, 4 * nb).noalias() += phi * row;
        }
      }
    }
    blocks[e] = std::move(a);
  });
  for (int e = 0; e < mesh.num_faces(); ++e) {
    const Face& f = mesh.face(e);
    const DenseMatrix& a = blocks[e];
    b.add(f.plus, f.plus, a.block(0, 0, 3 * nb, 2 * nb));
    if (!f.boundary()) {
      b.add(f.plus, f.minus, a.block(0, 2 * nb, 3 * nb, 2 * nb));
      b.add(f.minus, f.plus, a.block(3 * nb, 0, 3 * nb, 2 * nb));
      b.add(f.minus, f.minus, a.block(3 * nb, 2 * nb, 3 * nb, 2 * nb));
    }
  }
  return b.build();
}

Vector apply_lifting(const DgSpace& space, const StiffnessTensor& mat, const DgField& v) {
  if (&v.space() != &space) throw IncompatibleError("apply_lifting: field lives on another space");
  return assemble_lifting(space, mat) * v.coeffs();
}

SparseOperator assemble_strain_projection(const DgSpace& sp) {
  const Mesh& mesh = sp.mesh();
  const int nb = sp.scalar_size();
  std::vector<std::vector<int>> pat(mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) pat[k] = {k};
  BlockSparseBuilder b(mesh.num_triangles(), 3 * nb, mesh.num_triangles(), 2 * nb, pat);
  std::vector<DenseMatrix> blocks(mesh.num_triangles());
  parallel_for(mesh.num_triangles(), [&](int k) {
    DenseMatrix a = DenseMatrix::Zero(3 * nb, 2 * nb);
    for (int q = 0; q < sp.volume_rule().size(); ++q) {
      const StrainMatrix s = DgSpace::strain_matrix(sp.gradients(k, q));
      const Vector phi = sp.values(k, q) * sp.quad_weight(k, q);
      for (int m = 0; m < 3; ++m) a.block(m * nb, 0, nb, 2 * nb).noalias() += phi * s.row(m);
    }
    blocks[k] = std::move(a);
  });
  for (int k = 0; k < mesh.num_triangles(); ++k) b.add(k, k, blocks[k]);
  return b.build();
}

SparseOperator assemble_extended_A(const DgSpace& space, const StiffnessTensor& mat, const PenaltyConfig& penalty) {
  const SparseOperator e = assemble_strain_projection(space);
  const SparseOperator l = assemble_lifting(space, mat);
  const SparseOperator etl = e.transpose().multiply(l);  // (eps(v), L(u)) as v^T (E^T L) u
  const SparseOperator cross = etl.add(etl.transpose());
  return assemble_volume(space, mat).add(cross, 1.0, -1.0).add(assemble_penalty(space, penalty.alpha));
}

Vector assemble_load(const SpacePtr& space, const SpatialFunction& f) { return l2_project_function(space, f).coeffs(); }

DgField discrete_B_apply(const SparseOperator& k, const DgField& z) {
  if (k.rows() != z.space().num_dofs() || k.cols() != z.space().num_dofs())
    throw IncompatibleError("discrete_B_apply: operator and field dimensions differ");
  return DgField(z.space_ptr(), k * z.coeffs());
}

double estimate_inverse_constant(const DgSpace& sp) {
  const Mesh& mesh = sp.mesh();
  const int nb = sp.scalar_size();
  std::vector<double> lam(mesh.num_triangles());
  parallel_for(mesh.num_triangles(), [&](int k) {
    DenseMatrix m = DenseMatrix::Zero(nb, nb);
    for (int j = 0; j < 3; ++j) {
      const Face& f = mesh.face(mesh.triangle_face(k, j));
      const bool rev = f.plus != k;
      for (int q = 0; q < sp.edge_rule().size(); ++q) {
        const Vector phi = sp.edge_values(k, j, rev, q);
        m.noalias() += (sp.edge_rule().weights[q] * f.length * f.hface) * phi * phi.transpose();
      }
    }
    lam[k] = Eigen::SelfAdjointEigenSolver<DenseMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  });
  double mx = 0.0;
  for (double l : lam) mx = std::max(mx, l);
  return std::sqrt(mx);
}

double estimate_inverse_constant(const MeshFamily& family, int degree) {
  double c = 0.0;
  for (int i = 0; i < family.size(); ++i) c = std::max(c, estimate_inverse_constant(DgSpace(family.mesh_ptr(i), degree)));
  return c;
}

double reference_edge_inverse_ratio(int degree, int edge) {
  if (edge < 0 || edge > 2) throw std::out_of_range("reference_edge_inverse_ratio: edge id");
  const ReferenceBasis basis(degree);
  const LineRule rule = line_rule(2 * degree + 2);
  const Vec2 v[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const Vec2 a = v[edge], b = v[(edge + 1) % 3];
  const double len = (b - a).norm();
  DenseMatrix m = DenseMatrix::Zero(basis.size(), basis.size());
  for (int q = 0; q < rule.size(); ++q) {
    const Vector phi = basis.values(a + rule.points[q] * (b - a));
    m.noalias() += rule.weights[q] * len * phi * phi.transpose();
  }
  return std::sqrt(Eigen::SelfAdjointEigenSolver<DenseMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
}

double alpha_min(double c_inv, const StiffnessTensor& mat) {
  const SpectralBounds b = mat.bounds();
  return 4.0 * c_inv * c_inv * b.upper * b.upper / b.lower;
}

PenaltyConfig default_penalty(double c_inv, const StiffnessTensor& mat) { return {2.0 * alpha_min(c_inv, mat)}; }

double coercivity_constant(const StiffnessTensor& mat) { return std::min(0.5 * mat.bounds().lower, 0.5); }

double continuity_constant(double alpha, double c_inv, const StiffnessTensor& mat) {
  const double cs = mat.bounds().upper;
  return std::max(2.0, 2.0 * c_inv * cs / std::sqrt(alpha) + 2.0 * cs);
}

}  // namespace dgelast
