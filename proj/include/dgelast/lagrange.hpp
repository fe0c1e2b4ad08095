#pragma once

#include "dgelast/material.hpp"
#include "dgelast/space.hpp"
#include "dgelast/sparse.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace dgelast {

/// Vector function evaluated on a given triangle (lets callers use
/// element-local data such as a DG field on an ancestor mesh).
using ElementFunction = std::function<Vec2(int k, const Vec2& x)>;

/// Continuous P_k Lagrange space on a triangulation. Nodes are the
/// equispaced lattice points; vector dof (node, c) sits at 2 * node + c.
class LagrangeSpace {
 public:
  LagrangeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int local_size() const { return static_cast<int>(lattice_.size()); }
  const Vec2& node(int i) const { return nodes_[i]; }
  bool on_boundary(int i) const { return boundary_[i] != 0; }
  const std::vector<int>& element_nodes(int k) const { return elem_nodes_[k]; }

  Vector shape_values(const Vec2& xi) const;
  Eigen::MatrixX2d shape_gradients(const Vec2& xi) const;  // reference gradients

  /// Value of a nodal vector field (2 entries per node) at x in triangle k.
  Vec2 evaluate(const Vector& nodal, int k, const Vec2& x) const;

 private:
  Vector monomials(const Vec2& xi) const;
  Eigen::MatrixX2d monomial_gradients(const Vec2& xi) const;

  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::vector<std::array<int, 2>> lattice_;  // (a, b): xi = (a/k, b/k)
  std::vector<std::array<int, 2>> exponents_;
  DenseMatrix vinv_;  // nodal basis = vinv_^T * monomials
  std::vector<Vec2> nodes_;
  std::vector<char> boundary_;
  std::vector<std::vector<int>> elem_nodes_;
};

/// Nodal averaging of a DG field into the continuous space of the same
/// degree with zero boundary values, returned as a DG field.
DgField conforming_recovery(const DgField& z);

struct RecoveryRatios {
  double l2_ratio = 0.0;  // ||z - z_c|| / (sum hface ||[z]||^2)^{1/2}
  double h1_ratio = 0.0;  // ||grad(z - z_c)|| / (sum hface^{-1} ||[z]||^2)^{1/2}
};

RecoveryRatios recovery_ratios(const DgField& z, const DgField& recovered);

/// Conforming solve of -div sigma(w) = g, w = 0 on the boundary. Returns
/// nodal values (2 per node). Throws std::length_error above max_dofs.
Vector solve_conforming_elasticity(const LagrangeSpace& space, const StiffnessTensor& mat, const ElementFunction& g,
                                   double tol = 1e-11, int max_dofs = 400000);

/// ||w - z|| where z is a DG field on a coarser nested mesh; ancestors[k]
/// is the triangle of z's mesh containing triangle k of the Lagrange mesh.
double conforming_dg_distance(const LagrangeSpace& space, const Vector& nodal, const std::vector<int>& ancestors,
                              const DgField& z);

}  // namespace dgelast
