#include "dgelast/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace dgelast {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<int> parents, std::vector<int> materials)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      parents_(std::move(parents)),
      materials_(std::move(materials)) {
  const int nt = num_triangles();
  if (nt == 0) throw std::invalid_argument("mesh has no triangles");
  if (parents_.empty()) parents_.assign(nt, -1);
  if (materials_.empty()) materials_.assign(nt, 0);
  if (static_cast<int>(parents_.size()) != nt || static_cast<int>(materials_.size()) != nt)
    throw std::invalid_argument("parent/material arrays do not match triangle count");

  areas_.resize(nt);
  diameters_.resize(nt);
  inball_.resize(nt);
  for (int k = 0; k < nt; ++k) {
    const auto& t = triangles_[k];
    for (int v : t)
      if (v < 0 || v >= num_vertices()) throw std::invalid_argument("triangle references missing vertex");
    const Vec2 &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
    const double area = 0.5 * cross(b - a, c - a);
    if (!(area > 0.0))
      throw std::invalid_argument("triangle " + std::to_string(k) + " is degenerate or clockwise");
    const double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
    areas_[k] = area;
    diameters_[k] = std::max({la, lb, lc});
    inball_[k] = 4.0 * area / (la + lb + lc);
  }
  build_faces();
  check_conforming();
}

void Mesh::build_faces() {
  std::map<std::pair<int, int>, int> lookup;
  triangle_faces_.assign(num_triangles(), {-1, -1, -1});
  for (int k = 0; k < num_triangles(); ++k) {
    const auto& t = triangles_[k];
    for (int j = 0; j < 3; ++j) {
      const int a = t[j], b = t[(j + 1) % 3];
      auto [it, inserted] = lookup.emplace(edge_key(a, b), num_faces());
      if (inserted) {
        Face f;
        f.vertices = {a, b};
        f.plus = k;
        f.plus_local = j;
        const Vec2 d = vertices_[b] - vertices_[a];
        f.length = d.norm();
        f.normal = Vec2(d.y(), -d.x()) / f.length;
        faces_.push_back(f);
      } else {
        Face& f = faces_[it->second];
        if (f.minus >= 0)
          throw std::invalid_argument("edge shared by more than two triangles");
        if (f.vertices[0] != b || f.vertices[1] != a)
          throw std::invalid_argument("inconsistent orientation across an edge");
        f.minus = k;
        f.minus_local = j;
      }
      triangle_faces_[k][j] = it->second;
    }
  }
  num_interior_faces_ = 0;
  for (Face& f : faces_) {
    if (f.boundary()) {
      f.hface = diameters_[f.plus];
    } else {
      f.hface = std::min(diameters_[f.plus], diameters_[f.minus]);
      ++num_interior_faces_;
    }
  }
}

void Mesh::check_conforming() const {
  // A hanging node shows up as a vertex lying inside an edge that has only
  // one incident triangle.
  for (const Face& f : faces_) {
    if (!f.boundary()) continue;
    const Vec2& p = vertices_[f.vertices[0]];
    const Vec2& q = vertices_[f.vertices[1]];
    const Vec2 d = q - p;
    const double len2 = d.squaredNorm();
    for (int v = 0; v < num_vertices(); ++v) {
      if (v == f.vertices[0] || v == f.vertices[1]) continue;
      const Vec2 w = vertices_[v] - p;
      const double s = w.dot(d) / len2;
      if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
      if (std::abs(cross(d, w)) <= 1e-12 * len2)
        throw std::invalid_argument("hanging node at vertex " + std::to_string(v));
    }
  }
}

std::array<int, 3> Mesh::neighbors(int k) const {
  std::array<int, 3> out{};
  for (int j = 0; j < 3; ++j) {
    const Face& f = faces_[triangle_faces_[k][j]];
    out[j] = f.plus == k ? f.minus : f.plus;
  }
  return out;
}

Vec2 Mesh::centroid(int k) const {
  const auto& t = triangles_[k];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

double Mesh::domain_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

double Mesh::domain_diameter() const {
  // boundary vertices suffice, but meshes here are small enough for all pairs
  std::vector<int> bv;
  for (const Face& f : faces_)
    if (f.boundary()) {
      bv.push_back(f.vertices[0]);
      bv.push_back(f.vertices[1]);
    }
  std::sort(bv.begin(), bv.end());
  bv.erase(std::unique(bv.begin(), bv.end()), bv.end());
  double d = 0.0;
  for (size_t i = 0; i < bv.size(); ++i)
    for (size_t j = i + 1; j < bv.size(); ++j) d = std::max(d, (vertices_[bv[i]] - vertices_[bv[j]]).norm());
  return d;
}

double Mesh::max_diameter() const { return *std::max_element(diameters_.begin(), diameters_.end()); }

std::array<double, 3> Mesh::barycentric(int k, const Vec2& x) const {
  const auto& t = triangles_[k];
  const Vec2 &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
  const double det = cross(b - a, c - a);
  const double l1 = cross(x - a, c - a) / det;
  const double l2 = cross(b - a, x - a) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Mesh build_structured(int n, const Rect& domain) {
  if (n < 1) throw std::invalid_argument("build_structured: n must be positive");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw std::invalid_argument("build_structured: degenerate rectangle");
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(domain.x0 + (domain.x1 - domain.x0) * i / n, domain.y0 + (domain.y1 - domain.y0) * j / n);
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  return Mesh(std::move(verts), std::move(tris));
}

Mesh refine_nested(const Mesh& mesh, const std::vector<int>& marked) {
  const int nt = mesh.num_triangles();
  std::vector<char> red(nt, 0), cut(mesh.num_faces(), 0);
  for (int k : marked) {
    if (k < 0 || k >= nt) throw std::out_of_range("refine_nested: bad triangle id");
    red[k] = 1;
  }
  // closure: anything with two or more cut edges is promoted to red
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < nt; ++k)
      if (red[k])
        for (int j = 0; j < 3; ++j) cut[mesh.triangle_face(k, j)] = 1;
    for (int k = 0; k < nt; ++k) {
      if (red[k]) continue;
      int c = 0;
      for (int j = 0; j < 3; ++j) c += cut[mesh.triangle_face(k, j)];
      if (c >= 2) {
        red[k] = 1;
        changed = true;
      }
    }
  }

  std::vector<Vec2> verts = mesh.vertices();
  std::vector<int> midpoint(mesh.num_faces(), -1);
  for (int e = 0; e < mesh.num_faces(); ++e)
    if (cut[e]) {
      const Face& f = mesh.face(e);
      midpoint[e] = static_cast<int>(verts.size());
      verts.push_back(0.5 * (mesh.vertex(f.vertices[0]) + mesh.vertex(f.vertices[1])));
    }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> parents, mats;
  auto emit = [&](int k, std::array<int, 3> t) {
    tris.push_back(t);
    parents.push_back(k);
    mats.push_back(mesh.material(k));
  };
  for (int k = 0; k < nt; ++k) {
    const auto& t = mesh.triangle(k);
    if (red[k]) {
      const int a = t[0], b = t[1], c = t[2];
      const int mab = midpoint[mesh.triangle_face(k, 0)];
      const int mbc = midpoint[mesh.triangle_face(k, 1)];
      const int mca = midpoint[mesh.triangle_face(k, 2)];
      emit(k, {a, mab, mca});
      emit(k, {mab, b, mbc});
      emit(k, {mca, mbc, c});
      emit(k, {mab, mbc, mca});
      continue;
    }
    int j = -1;
    for (int jj = 0; jj < 3; ++jj)
      if (cut[mesh.triangle_face(k, jj)]) j = jj;
    if (j < 0) {
      emit(k, t);
      continue;
    }
    const int p = t[j], q = t[(j + 1) % 3], o = t[(j + 2) % 3];
    const int m = midpoint[mesh.triangle_face(k, j)];
    emit(k, {p, m, o});
    emit(k, {m, q, o});
  }
  return Mesh(std::move(verts), std::move(tris), std::move(parents), std::move(mats));
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<int> all(mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) all[k] = k;
  return refine_nested(mesh, all);
}

QualityReport quality_report(const Mesh& mesh) {
  QualityReport q;
  for (int k = 0; k < mesh.num_triangles(); ++k)
    q.shape_regularity = std::max(q.shape_regularity, mesh.diameter(k) / mesh.inball_diameter(k));
  for (const Face& f : mesh.faces()) {
    if (f.boundary()) continue;
    const double a = mesh.diameter(f.plus), b = mesh.diameter(f.minus);
    q.quasi_uniformity = std::max(q.quasi_uniformity, std::max(a / b, b / a));
  }
  return q;
}

MeshFamily::MeshFamily(Mesh macro) { meshes_.push_back(std::make_shared<const Mesh>(std::move(macro))); }

int MeshFamily::refine(const std::vector<int>& marked) {
  meshes_.push_back(std::make_shared<const Mesh>(refine_nested(*meshes_.back(), marked)));
  return size() - 1;
}

int MeshFamily::refine_uniform() {
  meshes_.push_back(std::make_shared<const Mesh>(dgelast::refine_uniform(*meshes_.back())));
  return size() - 1;
}

int MeshFamily::index_of(const Mesh& mesh) const {
  for (int i = 0; i < size(); ++i)
    if (meshes_[i].get() == &mesh) return i;
  throw IncompatibleError("mesh does not belong to this family");
}

std::vector<int> MeshFamily::ancestor_map(int fine, int coarse) const {
  if (coarse < 0 || fine >= size() || coarse > fine)
    throw IncompatibleError("ancestor_map: members are not ordered coarse <= fine");
  const int nt = mesh(fine).num_triangles();
  std::vector<int> map(nt);
  for (int k = 0; k < nt; ++k) map[k] = k;
  for (int level = fine; level > coarse; --level)
    for (int k = 0; k < nt; ++k) map[k] = mesh(level).parent(map[k]);
  return map;
}

MeshFamily MeshFamily::from_meshes(std::vector<Mesh> meshes) {
  if (meshes.empty()) throw std::invalid_argument("from_meshes: empty list");
  MeshFamily fam;
  int np = 0;
  for (size_t i = 0; i < meshes.size(); ++i) {
    if (i > 0) {
      for (int p : meshes[i].parents())
        if (p < 0 || p >= np) throw IncompatibleError("from_meshes: parent ids do not index the previous member");
    }
    np = meshes[i].num_triangles();
    fam.meshes_.push_back(std::make_shared<const Mesh>(std::move(meshes[i])));
  }
  return fam;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  std::ostringstream s;
  s.precision(17);
  s << "dgelast-mesh 1\n";
  s << "vertices " << mesh.num_vertices() << "\n";
  for (const Vec2& v : mesh.vertices()) s << v.x() << " " << v.y() << "\n";
  s << "triangles " << mesh.num_triangles() << "\n";
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto& t = mesh.triangle(k);
    s << t[0] << " " << t[1] << " " << t[2] << " " << mesh.parent(k) << " " << mesh.material(k) << "\n";
  }
  out << s.str();
}

Mesh read_mesh(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "dgelast-mesh" || version != 1)
    throw std::runtime_error("read_mesh: bad header");
  int nv = 0, nt = 0;
  if (!(in >> tag >> nv) || tag != "vertices" || nv < 0) throw std::runtime_error("read_mesh: bad vertex block");
  std::vector<Vec2> verts(nv);
  for (auto& v : verts)
    if (!(in >> v.x() >> v.y())) throw std::runtime_error("read_mesh: truncated vertices");
  if (!(in >> tag >> nt) || tag != "triangles" || nt < 0) throw std::runtime_error("read_mesh: bad triangle block");
  std::vector<std::array<int, 3>> tris(nt);
  std::vector<int> parents(nt), mats(nt);
  for (int k = 0; k < nt; ++k)
    if (!(in >> tris[k][0] >> tris[k][1] >> tris[k][2] >> parents[k] >> mats[k]))
      throw std::runtime_error("read_mesh: truncated triangles");
  return Mesh(std::move(verts), std::move(tris), std::move(parents), std::move(mats));
}

}  // namespace dgelast
