#pragma once

#include "dgelast/material.hpp"
#include "dgelast/mesh.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace dgelast {

/// Closed-form solution of rho u_tt - div sigma(u) = f (rho = 1) with
/// homogeneous Dirichlet data, isotropic material.
struct ManufacturedCase {
  std::string name;
  Rect domain;
  double lambda = 1.0, mu = 1.0;
  SpaceTimeFunction u, u_t, u_tt;
  SpaceTimeFunction div_stress;
  SpaceTimeFunction f;
  bool stationary = false;  // u independent of t, f = -div sigma(u)

  StiffnessTensor material() const { return StiffnessTensor::from_lame(lambda, mu); }
  SpatialFunction at(const SpaceTimeFunction& g, double t) const {
    return [g, t](const Vec2& x) { return g(t, x); };
  }
};

/// u = cos(t) sin(pi x) sin(pi y) (1, 1) on the unit square.
ManufacturedCase transient_sin_case(double lambda = 1.0, double mu = 1.0);
/// u = sin(pi x) sin(pi y) (1, 1), f = -div sigma(u).
ManufacturedCase stationary_sin_case(double lambda = 1.0, double mu = 1.0);
/// u = x(1-x) y(1-y) (1, 1), f = -div sigma(u); degree 4 polynomial.
ManufacturedCase stationary_polynomial_case(double lambda = 1.0, double mu = 1.0);

/// u = 0, f = 0.
ManufacturedCase zero_case(double lambda = 1.0, double mu = 1.0);

ManufacturedCase manufactured_case(const std::string& name, double lambda = 1.0, double mu = 1.0);

/// Largest |u_tt - div sigma(u) - f| over random space-time points, with
/// both derivatives taken by finite differences of u.
double strong_form_residual(const ManufacturedCase& c, int points = 100, std::uint64_t seed = 7, double t_max = 1.0);

}  // namespace dgelast
