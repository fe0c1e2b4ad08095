#pragma once

#include "dgelast/common.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

namespace dgelast {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// An edge of the triangulation. `plus` is the lower-numbered incident
/// triangle and the unit normal points out of it; `minus` is -1 on the
/// boundary.
struct Face {
  std::array<int, 2> vertices{};
  int plus = -1;
  int minus = -1;
  int plus_local = -1;   // local edge index in `plus`
  int minus_local = -1;  // local edge index in `minus`
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
  double hface = 0.0;  // min(h_K, h_K') inside, h_K on the boundary

  bool boundary() const { return minus < 0; }
};

/// Conforming affine triangulation in 2D. Triangles are stored counter-
/// clockwise; local edge j joins local vertices j and (j+1)%3.
///
/// Instances are immutable once built and can be shared read-only.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<int> parents = {}, std::vector<int> materials = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_interior_faces() const { return num_interior_faces_; }
  int num_boundary_faces() const { return num_faces() - num_interior_faces_; }

  const Vec2& vertex(int i) const { return vertices_[i]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::array<int, 3>& triangle(int k) const { return triangles_[k]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const Face& face(int e) const { return faces_[e]; }
  const std::vector<Face>& faces() const { return faces_; }
  /// Face id of local edge j of triangle k.
  int triangle_face(int k, int j) const { return triangle_faces_[k][j]; }
  /// Triangles sharing an edge with k (-1 for boundary edges), by local edge.
  std::array<int, 3> neighbors(int k) const;

  double area(int k) const { return areas_[k]; }
  double diameter(int k) const { return diameters_[k]; }
  /// Diameter of the inscribed circle.
  double inball_diameter(int k) const { return inball_[k]; }
  Vec2 centroid(int k) const;
  /// Parent triangle in the mesh this one was refined from, or -1.
  int parent(int k) const { return parents_[k]; }
  const std::vector<int>& parents() const { return parents_; }
  int material(int k) const { return materials_[k]; }
  const std::vector<int>& materials() const { return materials_; }

  double domain_area() const;
  /// Largest distance between two vertices.
  double domain_diameter() const;
  double max_diameter() const;

  /// Barycentric coordinates of x with respect to triangle k.
  std::array<double, 3> barycentric(int k, const Vec2& x) const;

 private:
  void build_faces();
  void check_conforming() const;

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> parents_;
  std::vector<int> materials_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> triangle_faces_;
  std::vector<double> areas_, diameters_, inball_;
  int num_interior_faces_ = 0;
};

/// 2 n^2 triangles: each of the n x n cells is split along its
/// lower-left to upper-right diagonal.
Mesh build_structured(int n, const Rect& domain = {});

/// Red refinement of the marked triangles plus closure: any triangle with
/// two or more refined edges is red-refined as well, triangles with exactly
/// one refined edge are bisected. Parents point into `mesh`.
Mesh refine_nested(const Mesh& mesh, const std::vector<int>& marked);

Mesh refine_uniform(const Mesh& mesh);

struct QualityReport {
  double shape_regularity = 0.0;  // max h_K / rho_K
  double quasi_uniformity = 1.0;  // max h_K / h_K' over neighbours
};

QualityReport quality_report(const Mesh& mesh);

/// A chain of nested meshes: mesh k+1 refines mesh k. Coarsening in time
/// is expressed by switching back to an earlier member.
class MeshFamily {
 public:
  explicit MeshFamily(Mesh macro);

  /// Refines the finest member and appends the result; returns its id.
  int refine(const std::vector<int>& marked);
  int refine_uniform();

  int size() const { return static_cast<int>(meshes_.size()); }
  const Mesh& mesh(int id) const { return *meshes_.at(id); }
  std::shared_ptr<const Mesh> mesh_ptr(int id) const { return meshes_.at(id); }
  /// Position of `mesh` in the chain; throws IncompatibleError if absent.
  int index_of(const Mesh& mesh) const;

  /// Ancestor in member `coarse` of each triangle of member `fine`
  /// (requires coarse <= fine).
  std::vector<int> ancestor_map(int fine, int coarse) const;

  /// Builds a family from explicitly given members; parents of member k+1
  /// must index member k.
  static MeshFamily from_meshes(std::vector<Mesh> meshes);

 private:
  MeshFamily() = default;
  std::vector<std::shared_ptr<const Mesh>> meshes_;
};

/// Plain-text mesh format:
///
///     dgelast-mesh 1
///     vertices <N>
///     <x> <y>                                  (N lines)
///     triangles <M>
///     <v0> <v1> <v2> <parent> <material>       (M lines)
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace dgelast
