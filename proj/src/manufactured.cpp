#include "dgelast/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dgelast {

namespace {

constexpr double kPi = std::numbers::pi;

// Isotropic div sigma for u = s (1, 1) given second derivatives of s.
Vec2 div_stress_diag(double lambda, double mu, double sxx, double sxy, double syy) {
  return Vec2(mu * (sxx + syy) + (lambda + mu) * (sxx + sxy), mu * (sxx + syy) + (lambda + mu) * (sxy + syy));
}

struct SinShape {
  static double s(const Vec2& x) { return std::sin(kPi * x.x()) * std::sin(kPi * x.y()); }
  static Vec2 div(double lambda, double mu, const Vec2& x) {
    const double v = s(x);
    const double cxy = kPi * kPi * std::cos(kPi * x.x()) * std::cos(kPi * x.y());
    return div_stress_diag(lambda, mu, -kPi * kPi * v, cxy, -kPi * kPi * v);
  }
};

struct PolyShape {
  static double s(const Vec2& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); }
  static Vec2 div(double lambda, double mu, const Vec2& x) {
    const double p = x.x() * (1 - x.x()), q = x.y() * (1 - x.y());
    return div_stress_diag(lambda, mu, -2 * q, (1 - 2 * x.x()) * (1 - 2 * x.y()), -2 * p);
  }
};

template <class Shape>
ManufacturedCase stationary_case(const std::string& name, double lambda, double mu) {
  ManufacturedCase c;
  c.name = name;
  c.lambda = lambda;
  c.mu = mu;
  c.stationary = true;
  c.u = [](double, const Vec2& x) { return Vec2(Shape::s(x), Shape::s(x)); };
  c.u_t = [](double, const Vec2&) { return Vec2(0.0, 0.0); };
  c.u_tt = c.u_t;
  c.div_stress = [lambda, mu](double, const Vec2& x) { return Shape::div(lambda, mu, x); };
  c.f = [lambda, mu](double, const Vec2& x) { return Vec2(-Shape::div(lambda, mu, x)); };
  return c;
}

}  // namespace

ManufacturedCase transient_sin_case(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "transient_sin";
  c.lambda = lambda;
  c.mu = mu;
  c.u = [](double t, const Vec2& x) {
    const double v = std::cos(t) * SinShape::s(x);
    return Vec2(v, v);
  };
  c.u_t = [](double t, const Vec2& x) {
    const double v = -std::sin(t) * SinShape::s(x);
    return Vec2(v, v);
  };
  c.u_tt = [](double t, const Vec2& x) {
    const double v = -std::cos(t) * SinShape::s(x);
    return Vec2(v, v);
  };
  c.div_stress = [lambda, mu](double t, const Vec2& x) { return Vec2(std::cos(t) * SinShape::div(lambda, mu, x)); };
  c.f = [lambda, mu](double t, const Vec2& x) {
    const double ct = std::cos(t);
    const double v = -ct * SinShape::s(x);
    return Vec2(Vec2(v, v) - ct * SinShape::div(lambda, mu, x));
  };
  return c;
}

ManufacturedCase stationary_sin_case(double lambda, double mu) {
  return stationary_case<SinShape>("stationary_sin", lambda, mu);
}

ManufacturedCase stationary_polynomial_case(double lambda, double mu) {
  return stationary_case<PolyShape>("stationary_polynomial", lambda, mu);
}

ManufacturedCase zero_case(double lambda, double mu) {
  ManufacturedCase c;
  c.name = "zero";
  c.lambda = lambda;
  c.mu = mu;
  c.u = [](double, const Vec2&) { return Vec2(0.0, 0.0); };
  c.u_t = c.u;
  c.u_tt = c.u;
  c.div_stress = c.u;
  c.f = c.u;
  return c;
}

ManufacturedCase manufactured_case(const std::string& name, double lambda, double mu) {
  if (name == "zero") return zero_case(lambda, mu);
  if (name == "transient_sin") return transient_sin_case(lambda, mu);
  if (name == "stationary_sin") return stationary_sin_case(lambda, mu);
  if (name == "stationary_polynomial") return stationary_polynomial_case(lambda, mu);
  throw std::invalid_argument("unknown manufactured case '" + name + "'");
}

double strong_form_residual(const ManufacturedCase& c, int points, std::uint64_t seed, double t_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(c.domain.x0, c.domain.x1), uy(c.domain.y0, c.domain.y1), ut(0.0, t_max);
  const double h = 1e-3;
  const double lambda = c.lambda, mu = c.mu;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = ut(rng);
    const Vec2 x(ux(rng), uy(rng));
    auto u = [&](double tt, double dx, double dy) { return c.u(tt, Vec2(x.x() + dx, x.y() + dy)); };
    // fourth-order central stencils
    auto d2 = [&](auto&& g) -> Vec2 { return (-g(2 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2 * h)) / (12 * h * h); };
    auto d1 = [&](auto&& g) -> Vec2 { return (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12 * h); };
    const Vec2 uxx = d2([&](double s) { return u(t, s, 0.0); });
    const Vec2 uyy = d2([&](double s) { return u(t, 0.0, s); });
    const Vec2 uxy = d1([&](double s) { return Vec2(d1([&](double r) { return u(t, r, s); })); });
    const Vec2 utt = c.stationary ? Vec2::Zero() : Vec2(d2([&](double s) { return u(t + s, 0.0, 0.0); }));
    // div sigma = mu lap u + (lambda + mu) grad div u
    const Vec2 lap = uxx + uyy;
    const Vec2 graddiv(uxx.x() + uxy.y(), uxy.x() + uyy.y());
    const Vec2 div = mu * lap + (lambda + mu) * graddiv;
    worst = std::max(worst, (utt - div - c.f(t, x)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dgelast
