#include "dgelast/lagrange.hpp"

#include "dgelast/linsolve.hpp"

#include <algorithm>
#include <cmath>

namespace dgelast {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

LagrangeSpace::LagrangeSpace(std::shared_ptr<const Mesh> mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (degree < 1) throw std::invalid_argument("LagrangeSpace: degree must be at least 1");
  const int p = degree;
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a + b <= p; ++a) lattice_.push_back({a, b});
  for (int total = 0; total <= p; ++total)
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
  const int n = local_size();
  DenseMatrix v(n, n);
  for (int i = 0; i < n; ++i) v.row(i) = monomials(Vec2(double(lattice_[i][0]) / p, double(lattice_[i][1]) / p)).transpose();
  vinv_ = v.inverse();

  const Mesh& m = *mesh_;
  // vertices first, then p-1 nodes per face, then interior nodes per triangle
  nodes_ = m.vertices();
  boundary_.assign(nodes_.size(), 0);
  std::vector<int> face_base(m.num_faces());
  for (int e = 0; e < m.num_faces(); ++e) {
    const Face& f = m.face(e);
    face_base[e] = static_cast<int>(nodes_.size());
    const Vec2 a = m.vertex(f.vertices[0]), b = m.vertex(f.vertices[1]);
    for (int i = 1; i < p; ++i) {
      nodes_.push_back(a + (double(i) / p) * (b - a));
      boundary_.push_back(f.boundary() ? 1 : 0);
    }
    if (f.boundary()) boundary_[f.vertices[0]] = boundary_[f.vertices[1]] = 1;
  }
  elem_nodes_.resize(m.num_triangles());
  for (int k = 0; k < m.num_triangles(); ++k) {
    const auto& t = m.triangle(k);
    auto& en = elem_nodes_[k];
    en.resize(n);
    for (int i = 0; i < n; ++i) {
      const int a = lattice_[i][0], b = lattice_[i][1], c = p - a - b;
      int local_edge = -1, step = 0;
      if (a == 0 && b == 0) {
        en[i] = t[0];
        continue;
      }
      if (a == p) {
        en[i] = t[1];
        continue;
      }
      if (b == p) {
        en[i] = t[2];
        continue;
      }
      if (b == 0) {
        local_edge = 0;
        step = a;
      } else if (c == 0) {
        local_edge = 1;
        step = b;
      } else if (a == 0) {
        local_edge = 2;
        step = p - b;
      }
      if (local_edge < 0) {
        en[i] = -1;  // interior, numbered below
        continue;
      }
      const int e = m.triangle_face(k, local_edge);
      const bool forward = m.face(e).plus == k;
      en[i] = face_base[e] + (forward ? step - 1 : p - 1 - step);
    }
    for (int i = 0; i < n; ++i)
      if (en[i] < 0) {
        en[i] = static_cast<int>(nodes_.size());
        nodes_.push_back(m.vertex(t[0]) + (m.vertex(t[1]) - m.vertex(t[0])) * (double(lattice_[i][0]) / p) +
                         (m.vertex(t[2]) - m.vertex(t[0])) * (double(lattice_[i][1]) / p));
        boundary_.push_back(0);
      }
  }
}

Vector LagrangeSpace::monomials(const Vec2& xi) const {
  Vector m(exponents_.size());
  for (size_t j = 0; j < exponents_.size(); ++j) m[j] = ipow(xi.x(), exponents_[j][0]) * ipow(xi.y(), exponents_[j][1]);
  return m;
}

Eigen::MatrixX2d LagrangeSpace::monomial_gradients(const Vec2& xi) const {
  Eigen::MatrixX2d g = Eigen::MatrixX2d::Zero(exponents_.size(), 2);
  for (size_t j = 0; j < exponents_.size(); ++j) {
    const int a = exponents_[j][0], b = exponents_[j][1];
    if (a > 0) g(j, 0) = a * ipow(xi.x(), a - 1) * ipow(xi.y(), b);
    if (b > 0) g(j, 1) = b * ipow(xi.x(), a) * ipow(xi.y(), b - 1);
  }
  return g;
}

Vector LagrangeSpace::shape_values(const Vec2& xi) const { return vinv_.transpose() * monomials(xi); }

Eigen::MatrixX2d LagrangeSpace::shape_gradients(const Vec2& xi) const {
  return vinv_.transpose() * monomial_gradients(xi);
}

Vec2 LagrangeSpace::evaluate(const Vector& nodal, int k, const Vec2& x) const {
  const auto& t = mesh_->triangle(k);
  Mat2 jac;
  jac.col(0) = mesh_->vertex(t[1]) - mesh_->vertex(t[0]);
  jac.col(1) = mesh_->vertex(t[2]) - mesh_->vertex(t[0]);
  const Vector n = shape_values(jac.inverse() * (x - mesh_->vertex(t[0])));
  Vec2 v = Vec2::Zero();
  const auto& en = elem_nodes_[k];
  for (int i = 0; i < local_size(); ++i) v += n[i] * Vec2(nodal[2 * en[i]], nodal[2 * en[i] + 1]);
  return v;
}

DgField conforming_recovery(const DgField& z) {
  const DgSpace& sp = z.space();
  const LagrangeSpace lag(sp.mesh_ptr(), sp.degree());
  Vector sum = Vector::Zero(2 * lag.num_nodes());
  std::vector<int> count(lag.num_nodes(), 0);
  for (int k = 0; k < sp.num_elements(); ++k)
    for (int nd : lag.element_nodes(k)) {
      if (lag.on_boundary(nd)) continue;
      const Vec2 v = z.value(k, lag.node(nd));
      sum[2 * nd] += v.x();
      sum[2 * nd + 1] += v.y();
      ++count[nd];
    }
  for (int nd = 0; nd < lag.num_nodes(); ++nd)
    if (count[nd] > 0) sum.segment(2 * nd, 2) /= count[nd];
  // the continuous field lies in the broken space, so projecting is exact
  DgField out(z.space_ptr());
  const int nb = sp.scalar_size();
  parallel_for(sp.num_elements(), [&](int k) {
    Vector c0 = Vector::Zero(nb), c1 = Vector::Zero(nb);
    for (int q = 0; q < sp.volume_rule().size(); ++q) {
      const Vec2 v = lag.evaluate(sum, k, sp.quad_point(k, q));
      const Vector phi = sp.values(k, q) * sp.quad_weight(k, q);
      c0 += v.x() * phi;
      c1 += v.y() * phi;
    }
    out.coeffs().segment(sp.dof(k, 0, 0), nb) = c0;
    out.coeffs().segment(sp.dof(k, 1, 0), nb) = c1;
  });
  return out;
}

RecoveryRatios recovery_ratios(const DgField& z, const DgField& recovered) {
  const DgField d = z - recovered;
  const Mesh& mesh = z.space().mesh();
  double jl2 = 0.0, jh1 = 0.0;
  for (int e = 0; e < mesh.num_faces(); ++e) {
    const double j = face_jump_squared(z, e);
    jl2 += mesh.face(e).hface * j;
    jh1 += j / mesh.face(e).hface;
  }
  RecoveryRatios r;
  // 0/0 is reported as 0; jumps at roundoff level relative to z count as 0
  const double zn = l2_norm(z) * mesh.domain_diameter();
  if (std::sqrt(jl2) <= 1e-12 * zn) return r;
  r.l2_ratio = l2_norm(d) / std::sqrt(jl2);
  r.h1_ratio = broken_h1_seminorm(d) / std::sqrt(jh1);
  return r;
}

Vector solve_conforming_elasticity(const LagrangeSpace& ls, const StiffnessTensor& mat, const ElementFunction& g,
                                   double tol, int max_dofs) {
  const Mesh& m = ls.mesh();
  const int ndof = 2 * ls.num_nodes();
  if (ndof > max_dofs) throw std::length_error("solve_conforming_elasticity: problem exceeds the size guard");
  // free dof numbering
  std::vector<int> free_id(ndof, -1);
  int nfree = 0;
  for (int nd = 0; nd < ls.num_nodes(); ++nd)
    if (!ls.on_boundary(nd)) {
      free_id[2 * nd] = nfree++;
      free_id[2 * nd + 1] = nfree++;
    }
  const int nl = ls.local_size();
  const TriangleRule rule = triangle_rule(2 * ls.degree() + 2);
  std::vector<Eigen::MatrixX2d> ref_grads(rule.size());
  std::vector<Vector> ref_vals(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    ref_grads[q] = ls.shape_gradients(rule.points[q]);
    ref_vals[q] = ls.shape_values(rule.points[q]);
  }
  std::vector<DenseMatrix> ke(m.num_triangles());
  std::vector<Vector> fe(m.num_triangles());
  parallel_for(m.num_triangles(), [&](int k) {
    const auto& t = m.triangle(k);
    const Vec2 o = m.vertex(t[0]);
    Mat2 jac;
    jac.col(0) = m.vertex(t[1]) - o;
    jac.col(1) = m.vertex(t[2]) - o;
    const double det = jac.determinant();
    const Mat2 inv = jac.inverse();
    const MandelMatrix& c = mat.matrix(m.material(k));
    DenseMatrix a = DenseMatrix::Zero(2 * nl, 2 * nl);
    Vector b = Vector::Zero(2 * nl);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * det;
      const Eigen::MatrixX2d gr = ref_grads[q] * inv;
      // interleaved layout (node, component)
      Eigen::Matrix<double, 3, Eigen::Dynamic> s = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2 * nl);
      for (int i = 0; i < nl; ++i) {
        s(0, 2 * i) = gr(i, 0);
        s(2, 2 * i) = gr(i, 1) / std::sqrt(2.0);
        s(1, 2 * i + 1) = gr(i, 1);
        s(2, 2 * i + 1) = gr(i, 0) / std::sqrt(2.0);
      }
      a.noalias() += w * s.transpose() * c * s;
      const Vec2 gv = g(k, o + jac * rule.points[q]);
      for (int i = 0; i < nl; ++i) {
        b[2 * i] += w * gv.x() * ref_vals[q][i];
        b[2 * i + 1] += w * gv.y() * ref_vals[q][i];
      }
    }
    ke[k] = std::move(a);
    fe[k] = std::move(b);
  });

  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> trip;
  Vector rhs = Vector::Zero(nfree);
  for (int k = 0; k < m.num_triangles(); ++k) {
    const auto& en = ls.element_nodes(k);
    for (int a = 0; a < 2 * nl; ++a) {
      const int ia = free_id[2 * en[a / 2] + a % 2];
      if (ia < 0) continue;
      rhs[ia] += fe[k][a];
      for (int b = 0; b < 2 * nl; ++b) {
        const int ib = free_id[2 * en[b / 2] + b % 2];
        if (ib >= 0) trip.push_back({ia, ib, ke[k](a, b)});
      }
    }
  }
  std::sort(trip.begin(), trip.end(), [](const Entry& x, const Entry& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
  std::vector<int> ptr(nfree + 1, 0), idx;
  std::vector<double> val;
  for (size_t p = 0; p < trip.size();) {
    size_t q = p;
    double s = 0.0;
    while (q < trip.size() && trip[q].i == trip[p].i && trip[q].j == trip[p].j) s += trip[q++].v;
    idx.push_back(trip[p].j);
    val.push_back(s);
    ++ptr[trip[p].i + 1];
    p = q;
  }
  for (int i = 0; i < nfree; ++i) ptr[i + 1] += ptr[i];
  const SparseOperator a(nfree, nfree, std::move(ptr), std::move(idx), std::move(val));
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = 50000;
  opts.block_size = 2;
  const SolveResult res = solve_spd(a, rhs, opts);
  Vector nodal = Vector::Zero(ndof);
  for (int d = 0; d < ndof; ++d)
    if (free_id[d] >= 0) nodal[d] = res.x[free_id[d]];
  return nodal;
}

double conforming_dg_distance(const LagrangeSpace& ls, const Vector& nodal, const std::vector<int>& ancestors,
                              const DgField& z) {
  const Mesh& m = ls.mesh();
  if (static_cast<int>(ancestors.size()) != m.num_triangles())
    throw IncompatibleError("conforming_dg_distance: ancestor map size mismatch");
  const TriangleRule rule = triangle_rule(2 * std::max(ls.degree(), z.space().degree()) + 2);
  std::vector<double> part(m.num_triangles());
  parallel_for(m.num_triangles(), [&](int k) {
    const auto& t = m.triangle(k);
    const Vec2 o = m.vertex(t[0]);
    Mat2 jac;
    jac.col(0) = m.vertex(t[1]) - o;
    jac.col(1) = m.vertex(t[2]) - o;
    const double det = jac.determinant();
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = o + jac * rule.points[q];
      s += rule.weights[q] * det * (ls.evaluate(nodal, k, x) - z.value(ancestors[k], x)).squaredNorm();
    }
    part[k] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return std::sqrt(s);
}

}  // namespace dgelast
