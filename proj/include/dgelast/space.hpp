#pragma once

#include "dgelast/basis.hpp"
#include "dgelast/mesh.hpp"
#include "dgelast/quadrature.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace dgelast {

/// Affine map x = origin + jac * xi from the reference triangle.
struct ElementMap {
  Vec2 origin = Vec2::Zero();
  Mat2 jac = Mat2::Identity();
  Mat2 inv = Mat2::Identity();
  double det = 1.0;
  double scale = 1.0;  // 1 / sqrt(det): makes the physical basis orthonormal

  Vec2 to_physical(const Vec2& xi) const { return origin + jac * xi; }
  Vec2 to_reference(const Vec2& x) const { return inv * (x - origin); }
};

/// Broken space P_r(K)^2. Dof (k, c, i) is basis function i of component c
/// on triangle k and sits at index (2k + c) * nb + i.
class DgSpace {
 public:
  DgSpace(std::shared_ptr<const Mesh> mesh, int degree, int quadrature_degree = -1);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int scalar_size() const { return basis_.size(); }
  int element_dofs() const { return 2 * basis_.size(); }
  int num_elements() const { return mesh_->num_triangles(); }
  int num_dofs() const { return num_elements() * element_dofs(); }
  int dof(int k, int c, int i) const { return (2 * k + c) * scalar_size() + i; }

  const ReferenceBasis& basis() const { return basis_; }
  const TriangleRule& volume_rule() const { return volume_rule_; }
  const LineRule& edge_rule() const { return edge_rule_; }
  const ElementMap& map(int k) const { return maps_[k]; }

  /// Physical quadrature point / weight on triangle k.
  Vec2 quad_point(int k, int q) const { return maps_[k].to_physical(volume_rule_.points[q]); }
  double quad_weight(int k, int q) const { return volume_rule_.weights[q] * maps_[k].det; }

  /// Physical basis values, gradients and second derivatives at a volume
  /// quadrature point.
  Vector values(int k, int q) const { return ref_values_.row(q).transpose() * maps_[k].scale; }
  Eigen::MatrixX2d gradients(int k, int q) const;
  Eigen::MatrixX3d hessians(int k, int q) const;

  /// Basis values on local edge j at edge quadrature point q; `reversed`
  /// runs the edge backwards (used for the minus side of a face).
  Vector edge_values(int k, int j, bool reversed, int q) const;
  Eigen::MatrixX2d edge_gradients(int k, int j, bool reversed, int q) const;
  /// Physical point of face e at edge quadrature point q (from vertices[0]).
  Vec2 face_point(int e, int q) const;

  /// Basis values / gradients at an arbitrary physical point of triangle k.
  Vector values_at(int k, const Vec2& x) const;
  Eigen::MatrixX2d gradients_at(int k, const Vec2& x) const;

  /// Mandel strain of each vector basis function, 3 x (2 nb), from scalar
  /// gradients.
  static Eigen::Matrix<double, 3, Eigen::Dynamic> strain_matrix(const Eigen::MatrixX2d& grads);

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  ReferenceBasis basis_;
  TriangleRule volume_rule_;
  LineRule edge_rule_;
  std::vector<ElementMap> maps_;
  DenseMatrix ref_values_;
  std::vector<Eigen::MatrixX2d> ref_grads_;
  std::vector<Eigen::MatrixX3d> ref_hess_;
  // [edge * 2 + reversed][q]
  std::vector<std::vector<Vector>> edge_vals_;
  std::vector<std::vector<Eigen::MatrixX2d>> edge_grads_;
};

using SpacePtr = std::shared_ptr<const DgSpace>;

/// Coefficient vector bound to a space.
class DgField {
 public:
  explicit DgField(SpacePtr space);
  DgField(SpacePtr space, Vector coeffs);

  const DgSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }

  /// Coefficients of triangle k, component c.
  Eigen::Ref<const Vector> block(int k, int c) const {
    return coeffs_.segment(space_->dof(k, c, 0), space_->scalar_size());
  }

  Vec2 value(int k, const Vec2& x) const;
  Vec2 value_qp(int k, int q) const;
  Mat2 gradient_qp(int k, int q) const;  // row = component

  DgField& operator+=(const DgField& o);
  DgField& operator-=(const DgField& o);
  DgField& operator*=(double s);
  friend DgField operator+(DgField a, const DgField& b) { return a += b; }
  friend DgField operator-(DgField a, const DgField& b) { return a -= b; }
  friend DgField operator*(double s, DgField a) { return a *= s; }

 private:
  void check_same(const DgField& o) const;
  SpacePtr space_;
  Vector coeffs_;
};

/// Orthogonal L2 projection; coefficients are the quadrature moments.
DgField l2_project_function(const SpacePtr& space, const SpatialFunction& f);

/// Exact L2 projection between spaces on members of one nested family,
/// integrating on the finer of the two meshes.
DgField l2_project_cross_mesh(const MeshFamily& family, const DgField& field, const SpacePtr& target);

struct FieldNorms {
  double l2 = 0.0;
  double broken_h1 = 0.0;  // broken gradient seminorm
  double dg = 0.0;         // strain part plus penalty-weighted jumps
};

double l2_norm(const DgField& field);
/// ||field - f|| with a rule of degree 2r + 2 + extra_degree.
double l2_distance(const DgField& field, const SpatialFunction& f, int extra_degree = 4);
double l2_norm(const Mesh& mesh, const SpatialFunction& f, int degree);
/// sum_K ||eps(v)||^2
double strain_seminorm_squared(const DgField& field);
double broken_h1_seminorm(const DgField& field);
/// integral over face e of |[v]|^2 (one-sided on the boundary)
double face_jump_squared(const DgField& field, int e);
/// sum_e weight(e) * ||[v]||_e^2 with weight alpha / hface
double jump_seminorm_squared(const DgField& field, double alpha);
double dg_norm(const DgField& field, double alpha);
FieldNorms field_norms(const DgField& field, double alpha);

/// Plain-text field format:
///
///     dgelast-field 1
///     degree <r> elements <M> dofs <N>
///     <coefficient>                            (N lines, dof order)
void write_field(std::ostream& out, const DgField& field);
DgField read_field(std::istream& in, const SpacePtr& space);

}  // namespace dgelast
