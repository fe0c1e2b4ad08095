#pragma once

#include "dgelast/material.hpp"
#include "dgelast/space.hpp"
#include "dgelast/sparse.hpp"

namespace dgelast {

/// Penalty alpha; face weight alpha / hface.
struct PenaltyConfig {
  double alpha = 1.0;
  double weight(const Face& f) const { return alpha / f.hface; }
};

/// Symmetric interior penalty matrix: v^T K u = a_h(u, v).
SparseOperator assemble_ah(const DgSpace& space, const StiffnessTensor& mat, const PenaltyConfig& penalty);

/// sum_K int sigma(u) : eps(v)
SparseOperator assemble_volume(const DgSpace& space, const StiffnessTensor& mat);
/// sum_e alpha / hface int [u] . [v]
SparseOperator assemble_penalty(const DgSpace& space, double alpha);
/// Gram matrix of the DG norm: sum_K int eps(u):eps(v) + penalty part.
SparseOperator assemble_dg_gram(const DgSpace& space, double alpha);

/// Tensor-valued broken space shares the scalar basis; its dof (k, m, i)
/// (Mandel component m) sits at (3k + m) * nb + i.
int tensor_dofs(const DgSpace& space);

/// Matrix of the lifting operator: tensor dofs x vector dofs.
SparseOperator assemble_lifting(const DgSpace& space, const StiffnessTensor& mat);
/// Coefficients of the lifting of v in the tensor space.
Vector apply_lifting(const DgSpace& space, const StiffnessTensor& mat, const DgField& v);
/// E with (E u)_{(k,m,i)} = int_K eps(u)_m phi_i.
SparseOperator assemble_strain_projection(const DgSpace& space);

/// Matrix of the lifted form A(u, v) = (sigma(u), eps(v)) - (eps(u), L(v))
/// - (eps(v), L(u)) + penalty.
SparseOperator assemble_extended_A(const DgSpace& space, const StiffnessTensor& mat, const PenaltyConfig& penalty);

/// Load moments (f, phi) for every dof.
Vector assemble_load(const SpacePtr& space, const SpatialFunction& f);

/// B z with (B z, v) = a_h(z, v); the mass matrix is the identity.
DgField discrete_B_apply(const SparseOperator& k, const DgField& z);

/// C_inv for the given mesh: the square root of
/// max_K lambda_max(sum_{e in dK} hface_e M_e) with M_e the edge mass
/// matrix of the orthonormal scalar basis of P_r.
double estimate_inverse_constant(const DgSpace& space);
double estimate_inverse_constant(const MeshFamily& family, int degree);
/// sqrt(lambda_max) of the edge mass matrix of local edge j on the
/// reference triangle (no h scaling).
double reference_edge_inverse_ratio(int degree, int edge = 0);

/// 4 C_inv^2 (C*)^2 / c_*
double alpha_min(double c_inv, const StiffnessTensor& mat);
/// 2 alpha_min
PenaltyConfig default_penalty(double c_inv, const StiffnessTensor& mat);
/// min(c_* / 2, 1/2)
double coercivity_constant(const StiffnessTensor& mat);
/// max(2, 2 alpha^{-1/2} C_inv C* + 2 C*)
double continuity_constant(double alpha, double c_inv, const StiffnessTensor& mat);

}  // namespace dgelast
