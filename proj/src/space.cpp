#include "dgelast/space.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace dgelast {

namespace {

const Vec2 kRefVertex[3] = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

Vec2 ref_edge_point(int j, double s) { return kRefVertex[j] + s * (kRefVertex[(j + 1) % 3] - kRefVertex[j]); }

}  // namespace

DgSpace::DgSpace(std::shared_ptr<const Mesh> mesh, int degree, int quadrature_degree)
    : mesh_(std::move(mesh)), degree_(degree), basis_(degree) {
  if (!mesh_) throw std::invalid_argument("DgSpace: null mesh");
  if (degree < 1) throw std::invalid_argument("DgSpace: degree must be at least 1");
  if (quadrature_degree < 0) quadrature_degree = 2 * degree + 2;
  volume_rule_ = triangle_rule(quadrature_degree);
  edge_rule_ = line_rule(quadrature_degree);

  maps_.resize(mesh_->num_triangles());
  for (int k = 0; k < mesh_->num_triangles(); ++k) {
    const auto& t = mesh_->triangle(k);
    ElementMap& m = maps_[k];
    m.origin = mesh_->vertex(t[0]);
    m.jac.col(0) = mesh_->vertex(t[1]) - m.origin;
    m.jac.col(1) = mesh_->vertex(t[2]) - m.origin;
    m.det = m.jac.determinant();
    m.inv = m.jac.inverse();
    m.scale = 1.0 / std::sqrt(m.det);
  }

  const int nq = volume_rule_.size();
  ref_values_.resize(nq, basis_.size());
  ref_grads_.resize(nq);
  ref_hess_.resize(nq);
  for (int q = 0; q < nq; ++q) {
    ref_values_.row(q) = basis_.values(volume_rule_.points[q]).transpose();
    ref_grads_[q] = basis_.gradients(volume_rule_.points[q]);
    ref_hess_[q] = basis_.hessians(volume_rule_.points[q]);
  }
  edge_vals_.resize(6);
  edge_grads_.resize(6);
  for (int j = 0; j < 3; ++j)
    for (int rev = 0; rev < 2; ++rev) {
      auto& vals = edge_vals_[2 * j + rev];
      auto& grads = edge_grads_[2 * j + rev];
      for (int q = 0; q < edge_rule_.size(); ++q) {
        const double s = rev ? 1.0 - edge_rule_.points[q] : edge_rule_.points[q];
        const Vec2 xi = ref_edge_point(j, s);
        vals.push_back(basis_.values(xi));
        grads.push_back(basis_.gradients(xi));
      }
    }
}

Eigen::MatrixX2d DgSpace::gradients(int k, int q) const {
  const ElementMap& m = maps_[k];
  return ref_grads_[q] * m.inv * m.scale;
}

Eigen::MatrixX3d DgSpace::hessians(int k, int q) const {
  const ElementMap& m = maps_[k];
  const Mat2& a = m.inv;  // d xi_i / d x_j = a(i, j)
  const Eigen::MatrixX3d& h = ref_hess_[q];
  Eigen::MatrixX3d out(h.rows(), 3);
  for (int i = 0; i < h.rows(); ++i) {
    Mat2 hr;
    hr << h(i, 0), h(i, 1), h(i, 1), h(i, 2);
    const Mat2 hp = a.transpose() * hr * a;
    out(i, 0) = hp(0, 0);
    out(i, 1) = hp(0, 1);
    out(i, 2) = hp(1, 1);
  }
  return out * m.scale;
}

Vector DgSpace::edge_values(int k, int j, bool reversed, int q) const {
  return edge_vals_[2 * j + (reversed ? 1 : 0)][q] * maps_[k].scale;
}

Eigen::MatrixX2d DgSpace::edge_gradients(int k, int j, bool reversed, int q) const {
  const ElementMap& m = maps_[k];
  return edge_grads_[2 * j + (reversed ? 1 : 0)][q] * m.inv * m.scale;
}

Vec2 DgSpace::face_point(int e, int q) const {
  const Face& f = mesh_->face(e);
  const Vec2& p = mesh_->vertex(f.vertices[0]);
  const Vec2& r = mesh_->vertex(f.vertices[1]);
  return p + edge_rule_.points[q] * (r - p);
}

Vector DgSpace::values_at(int k, const Vec2& x) const {
  return basis_.values(maps_[k].to_reference(x)) * maps_[k].scale;
}

Eigen::MatrixX2d DgSpace::gradients_at(int k, const Vec2& x) const {
  const ElementMap& m = maps_[k];
  return basis_.gradients(m.to_reference(x)) * m.inv * m.scale;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> DgSpace::strain_matrix(const Eigen::MatrixX2d& g) {
  const int nb = static_cast<int>(g.rows());
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix<double, 3, Eigen::Dynamic> s = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2 * nb);
  for (int i = 0; i < nb; ++i) {
    s(0, i) = g(i, 0);
    s(2, i) = r * g(i, 1);
    s(1, nb + i) = g(i, 1);
    s(2, nb + i) = r * g(i, 0);
  }
  return s;
}

// --- DgField ---------------------------------------------------------------

DgField::DgField(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("DgField: null space");
  coeffs_ = Vector::Zero(space_->num_dofs());
}

DgField::DgField(SpacePtr space, Vector coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw std::invalid_argument("DgField: null space");
  if (coeffs_.size() != space_->num_dofs())
    throw IncompatibleError("DgField: coefficient length does not match the space");
}

void DgField::check_same(const DgField& o) const {
  if (space_ != o.space_) throw IncompatibleError("fields live on different spaces");
}

DgField& DgField::operator+=(const DgField& o) {
  check_same(o);
  coeffs_ += o.coeffs_;
  return *this;
}

DgField& DgField::operator-=(const DgField& o) {
  check_same(o);
  coeffs_ -= o.coeffs_;
  return *this;
}

DgField& DgField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

Vec2 DgField::value(int k, const Vec2& x) const {
  const Vector phi = space_->values_at(k, x);
  return Vec2(block(k, 0).dot(phi), block(k, 1).dot(phi));
}

Vec2 DgField::value_qp(int k, int q) const {
  const Vector phi = space_->values(k, q);
  return Vec2(block(k, 0).dot(phi), block(k, 1).dot(phi));
}

Mat2 DgField::gradient_qp(int k, int q) const {
  const Eigen::MatrixX2d g = space_->gradients(k, q);
  Mat2 out;
  out.row(0) = block(k, 0).transpose() * g;
  out.row(1) = block(k, 1).transpose() * g;
  return out;
}

// --- projections -------------------------------------------------------------

DgField l2_project_function(const SpacePtr& space, const SpatialFunction& f) {
  DgField out(space);
  const int nb = space->scalar_size();
  const int nq = space->volume_rule().size();
  std::vector<int> bad(space->num_elements(), 0);
  parallel_for(space->num_elements(), [&](int k) {
    Vector c0 = Vector::Zero(nb), c1 = Vector::Zero(nb);
    for (int q = 0; q < nq; ++q) {
      const Vec2 v = f(space->quad_point(k, q));
      if (!std::isfinite(v.x()) || !std::isfinite(v.y())) bad[k] = 1;
      const Vector phi = space->values(k, q);
      const double w = space->quad_weight(k, q);
      c0 += (w * v.x()) * phi;
      c1 += (w * v.y()) * phi;
    }
    out.coeffs().segment(space->dof(k, 0, 0), nb) = c0;
    out.coeffs().segment(space->dof(k, 1, 0), nb) = c1;
  });
  for (int k = 0; k < space->num_elements(); ++k)
    if (bad[k]) throw std::domain_error("l2_project_function: non-finite value on triangle " + std::to_string(k));
  return out;
}

DgField l2_project_cross_mesh(const MeshFamily& family, const DgField& field, const SpacePtr& target) {
  const DgSpace& src = field.space();
  if (field.space_ptr() == target) return field;
  const int ia = family.index_of(src.mesh());
  const int ib = family.index_of(target->mesh());
  if (ia == ib && src.degree() == target->degree()) {
    // same mesh and degree: same basis, so the coefficients carry over
    return DgField(target, field.coeffs());
  }
  const int fine = std::max(ia, ib);
  const std::vector<int> anc_a = family.ancestor_map(fine, ia);
  const std::vector<int> anc_b = family.ancestor_map(fine, ib);
  const Mesh& fm = family.mesh(fine);
  const int nbt = target->scalar_size();
  const TriangleRule rule = triangle_rule(src.degree() + target->degree());

  // per fine triangle contributions, merged in order afterwards
  std::vector<Vector> local(fm.num_triangles());
  parallel_for(fm.num_triangles(), [&](int kf) {
    const auto& t = fm.triangle(kf);
    const Vec2 o = fm.vertex(t[0]);
    Mat2 jac;
    jac.col(0) = fm.vertex(t[1]) - o;
    jac.col(1) = fm.vertex(t[2]) - o;
    const double det = jac.determinant();
    Vector acc = Vector::Zero(2 * nbt);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = o + jac * rule.points[q];
      const double w = rule.weights[q] * det;
      const Vec2 v = field.value(anc_a[kf], x);
      const Vector phi = target->values_at(anc_b[kf], x);
      acc.head(nbt) += (w * v.x()) * phi;
      acc.tail(nbt) += (w * v.y()) * phi;
    }
    local[kf] = std::move(acc);
  });
  DgField out(target);
  for (int kf = 0; kf < fm.num_triangles(); ++kf) {
    const int kb = anc_b[kf];
    out.coeffs().segment(target->dof(kb, 0, 0), 2 * nbt) += local[kf];
  }
  return out;
}

// --- norms -------------------------------------------------------------------

double l2_norm(const DgField& field) { return field.coeffs().norm(); }

double l2_distance(const DgField& field, const SpatialFunction& f, int extra_degree) {
  const DgSpace& sp = field.space();
  const TriangleRule rule = triangle_rule(2 * sp.degree() + 2 + extra_degree);
  std::vector<double> part(sp.num_elements());
  parallel_for(sp.num_elements(), [&](int k) {
    const ElementMap& m = sp.map(k);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = m.to_physical(rule.points[q]);
      s += rule.weights[q] * m.det * (field.value(k, x) - f(x)).squaredNorm();
    }
    part[k] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const SpatialFunction& f, int degree) {
  const TriangleRule rule = triangle_rule(degree);
  std::vector<double> part(mesh.num_triangles());
  parallel_for(mesh.num_triangles(), [&](int k) {
    const auto& t = mesh.triangle(k);
    const Vec2 o = mesh.vertex(t[0]);
    Mat2 jac;
    jac.col(0) = mesh.vertex(t[1]) - o;
    jac.col(1) = mesh.vertex(t[2]) - o;
    const double det = jac.determinant();
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * det * f(o + jac * rule.points[q]).squaredNorm();
    part[k] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return std::sqrt(s);
}

double strain_seminorm_squared(const DgField& field) {
  const DgSpace& sp = field.space();
  std::vector<double> part(sp.num_elements());
  parallel_for(sp.num_elements(), [&](int k) {
    double s = 0.0;
    for (int q = 0; q < sp.volume_rule().size(); ++q) {
      const Mat2 g = field.gradient_qp(k, q);
      const Mat2 e = 0.5 * (g + g.transpose());
      s += sp.quad_weight(k, q) * e.squaredNorm();
    }
    part[k] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

double broken_h1_seminorm(const DgField& field) {
  const DgSpace& sp = field.space();
  std::vector<double> part(sp.num_elements());
  parallel_for(sp.num_elements(), [&](int k) {
    double s = 0.0;
    for (int q = 0; q < sp.volume_rule().size(); ++q) s += sp.quad_weight(k, q) * field.gradient_qp(k, q).squaredNorm();
    part[k] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return std::sqrt(s);
}

double face_jump_squared(const DgField& field, int e) {
  const DgSpace& sp = field.space();
  const Face& f = sp.mesh().face(e);
  double s = 0.0;
  for (int q = 0; q < sp.edge_rule().size(); ++q) {
    const Vector pp = sp.edge_values(f.plus, f.plus_local, false, q);
    Vec2 jump(field.block(f.plus, 0).dot(pp), field.block(f.plus, 1).dot(pp));
    if (!f.boundary()) {
      const Vector pm = sp.edge_values(f.minus, f.minus_local, true, q);
      jump -= Vec2(field.block(f.minus, 0).dot(pm), field.block(f.minus, 1).dot(pm));
    }
    s += sp.edge_rule().weights[q] * f.length * jump.squaredNorm();
  }
  return s;
}

double jump_seminorm_squared(const DgField& field, double alpha) {
  const Mesh& mesh = field.space().mesh();
  std::vector<double> part(mesh.num_faces());
  parallel_for(mesh.num_faces(), [&](int e) { part[e] = alpha / mesh.face(e).hface * face_jump_squared(field, e); });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

double dg_norm(const DgField& field, double alpha) {
  return std::sqrt(strain_seminorm_squared(field) + jump_seminorm_squared(field, alpha));
}

FieldNorms field_norms(const DgField& field, double alpha) {
  FieldNorms n;
  n.l2 = l2_norm(field);
  n.broken_h1 = broken_h1_seminorm(field);
  n.dg = dg_norm(field, alpha);
  return n;
}

void write_field(std::ostream& out, const DgField& field) {
  std::ostringstream s;
  s.precision(17);
  const DgSpace& sp = field.space();
  s << "dgelast-field 1\n";
  s << "degree " << sp.degree() << " elements " << sp.num_elements() << " dofs " << sp.num_dofs() << "\n";
  for (Eigen::Index i = 0; i < field.coeffs().size(); ++i) s << field.coeffs()[i] << "\n";
  out << s.str();
}

DgField read_field(std::istream& in, const SpacePtr& space) {
  std::string tag, kd, ke, kn;
  int version = 0, r = 0, m = 0, n = 0;
  if (!(in >> tag >> version) || tag != "dgelast-field" || version != 1)
    throw std::runtime_error("read_field: bad header");
  if (!(in >> kd >> r >> ke >> m >> kn >> n) || kd != "degree" || ke != "elements" || kn != "dofs")
    throw std::runtime_error("read_field: bad descriptor");
  if (r != space->degree() || m != space->num_elements() || n != space->num_dofs())
    throw IncompatibleError("read_field: descriptor does not match the target space");
  Vector c(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> c[i])) throw std::runtime_error("read_field: truncated coefficients");
  return DgField(space, std::move(c));
}

}  // namespace dgelast
