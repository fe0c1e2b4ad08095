#include "dgelast/reconstruction.hpp"

#include "dgelast/assembly.hpp"

#include <cmath>
#include <map>

namespace dgelast {

int interval_of(const TransientTrace& trace, double t) {
  const double tau = trace.tau();
  if (t < -1e-14 * trace.final_time || t > trace.final_time * (1.0 + 1e-14))
    throw std::out_of_range("time outside [0, T]");
  int n = static_cast<int>(std::ceil(t / tau - 1e-12));
  return std::clamp(n, 1, trace.steps);
}

TimeReconstruction eval_uN_interval(const TransientTrace& trace, int n, double t) {
  if (n < 1 || n > trace.steps) throw std::out_of_range("eval_uN: interval index out of range");
  const double tau = trace.tau();
  const double t0 = trace.times[n - 1];
  const double s = t - t0;
  if (s < -1e-12 * tau || s > tau * (1.0 + 1e-12)) throw std::out_of_range("eval_uN: time outside the interval");
  const DgField un = trace.u_common(n), um = trace.u_common(n - 1), dd = trace.ddu(n);
  const double r = tau - s;
  TimeReconstruction out{un, un, un};
  out.value.coeffs() = (s / tau) * un.coeffs() + (r / tau) * um.coeffs() - (s * r * r / tau) * dd.coeffs();
  out.first.coeffs() = (un.coeffs() - um.coeffs()) / tau - ((r * r - 2.0 * s * r) / tau) * dd.coeffs();
  out.second.coeffs() = (4.0 - 6.0 * s / tau) * dd.coeffs();
  return out;
}

TimeReconstruction eval_uN(const TransientTrace& trace, double t) {
  return eval_uN_interval(trace, interval_of(trace, t), t);
}

double eval_mu(int n, double t, double tau) {
  const double a = (n - 1) * tau, b = n * tau;
  if (t < a - 1e-12 * tau || t > b + 1e-12 * tau) throw std::out_of_range("eval_mu: time outside the interval");
  return -(6.0 / tau) * (t - 0.5 * (a + b));
}

// --- mixed fields ------------------------------------------------------------

MixedField MixedField::zero(const DgSpace& space) {
  return {Vector::Zero(space.num_dofs()),
          Eigen::MatrixX2d::Zero(space.num_elements() * space.volume_rule().size(), 2)};
}

MixedField& MixedField::operator+=(const MixedField& o) {
  coeffs += o.coeffs;
  samples += o.samples;
  return *this;
}

MixedField& MixedField::operator-=(const MixedField& o) {
  coeffs -= o.coeffs;
  samples -= o.samples;
  return *this;
}

MixedField& MixedField::operator*=(double s) {
  coeffs *= s;
  samples *= s;
  return *this;
}

Eigen::MatrixX2d qp_values(const DgSpace& sp, const MixedField& f) {
  const int nq = sp.volume_rule().size(), nb = sp.scalar_size();
  Eigen::MatrixX2d out = f.samples;
  parallel_for(sp.num_elements(), [&](int k) {
    for (int q = 0; q < nq; ++q) {
      const Vector phi = sp.values(k, q);
      out(k * nq + q, 0) += f.coeffs.segment(sp.dof(k, 0, 0), nb).dot(phi);
      out(k * nq + q, 1) += f.coeffs.segment(sp.dof(k, 1, 0), nb).dot(phi);
    }
  });
  return out;
}

Eigen::MatrixX2d sample(const DgSpace& sp, const SpatialFunction& f) {
  const int nq = sp.volume_rule().size();
  Eigen::MatrixX2d out(sp.num_elements() * nq, 2);
  parallel_for(sp.num_elements(), [&](int k) {
    for (int q = 0; q < nq; ++q) out.row(k * nq + q) = f(sp.quad_point(k, q)).transpose();
  });
  return out;
}

namespace {

Vector qp_weights(const DgSpace& sp) {
  const int nq = sp.volume_rule().size();
  Vector w(sp.num_elements() * nq);
  for (int k = 0; k < sp.num_elements(); ++k)
    for (int q = 0; q < nq; ++q) w[k * nq + q] = sp.quad_weight(k, q);
  return w;
}

double weighted_dot(const Vector& w, const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b) {
  return (w.array() * (a.col(0).array() * b.col(0).array() + a.col(1).array() * b.col(1).array())).sum();
}

}  // namespace

double l2_inner(const DgSpace& sp, const MixedField& a, const MixedField& b) {
  return weighted_dot(qp_weights(sp), qp_values(sp, a), qp_values(sp, b));
}

double l2_norm(const DgSpace& sp, const MixedField& a) { return std::sqrt(std::max(0.0, l2_inner(sp, a, a))); }

Vec2 time_average(const SpaceTimeFunction& f, double a, double b, const Vec2& x, int points) {
  const LineRule rule = gauss_legendre(points);
  const Vec2 fb = f(b, x);
  Vec2 acc = Vec2::Zero();
  for (int k = 0; k < rule.size(); ++k) acc += rule.weights[k] * (f(a + rule.points[k] * (b - a), x) - fb);
  return fb + acc;
}

// --- g series ----------------------------------------------------------------

namespace {

Eigen::Matrix3d gram3(const DgSpace& sp, const Vector& w, const MixedField& a, const MixedField& b,
                      const MixedField& c) {
  const Eigen::MatrixX2d va = qp_values(sp, a), vb = qp_values(sp, b), vc = qp_values(sp, c);
  Eigen::Matrix3d g;
  g(0, 0) = weighted_dot(w, va, va);
  g(1, 1) = weighted_dot(w, vb, vb);
  g(2, 2) = weighted_dot(w, vc, vc);
  g(0, 1) = g(1, 0) = weighted_dot(w, va, vb);
  g(0, 2) = g(2, 0) = weighted_dot(w, va, vc);
  g(1, 2) = g(2, 1) = weighted_dot(w, vb, vc);
  return g;
}

}  // namespace

ReconstructionData ReconstructionData::from_differences(SpacePtr common, double tau, std::vector<MixedField> dg,
                                                        std::vector<MixedField> ddg) {
  if (dg.size() != ddg.size() || dg.size() < 2) throw std::invalid_argument("from_differences: need levels 1..N");
  ReconstructionData d;
  d.common = std::move(common);
  d.tau = tau;
  d.steps = static_cast<int>(dg.size()) - 1;
  const Vector w = qp_weights(*d.common);
  d.gram.assign(d.steps + 1, Eigen::Matrix3d::Zero());
  d.gamma.push_back(MixedField::zero(*d.common));
  for (int n = 1; n <= d.steps; ++n) {
    d.gamma.push_back(d.gamma.back() + (0.5 * tau * tau) * dg[n] + (tau * tau * tau / 12.0) * ddg[n]);
    d.gram[n] = gram3(*d.common, w, dg[n], ddg[n], d.gamma[n]);
  }
  d.dg = std::move(dg);
  d.ddg = std::move(ddg);
  return d;
}

ReconstructionData build_g_series(const TransientTrace& tr, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                                  bool keep_fields) {
  const DgSpace& cs = *tr.common;
  const double tau = tr.tau();
  const Vector w = qp_weights(cs);
  std::map<int, SparseOperator> stiff;
  auto k_of = [&](int member) -> const SparseOperator& {
    auto it = stiff.find(member);
    if (it == stiff.end()) it = stiff.emplace(member, level_stiffness(tr, mat, member)).first;
    return it->second;
  };
  // B^n v - Pi^n f(t) on level n, moved to the common space
  auto discrete_part = [&](int n, const DgField& v, double t) {
    const SpacePtr& sp = tr.level_space(n);
    Vector c = k_of(tr.schedule[n]) * v.coeffs();
    c -= l2_project_function(sp, [&](const Vec2& x) { return f(t, x); }).coeffs();
    return tr.to_common(DgField(sp, std::move(c))).coeffs();
  };

  ReconstructionData d;
  d.common = tr.common;
  d.tau = tau;
  d.steps = tr.steps;
  d.gram.assign(tr.steps + 1, Eigen::Matrix3d::Zero());

  const Eigen::MatrixX2d f0 = sample(cs, [&](const Vec2& x) { return f(0.0, x); });
  MixedField g_prev{discrete_part(0, tr.u[0], 0.0), f0};
  MixedField dg_prev{discrete_part(0, tr.to_level(tr.du[0], 0), 0.0), f0};
  MixedField gamma = MixedField::zero(cs);
  if (keep_fields) {
    d.g.push_back(g_prev);
    d.dg.push_back(dg_prev);
    d.ddg.push_back(MixedField::zero(cs));
    d.gamma.push_back(gamma);
    d.dg0 = dg_prev;
  }
  for (int n = 1; n <= tr.steps; ++n) {
    const double a = tr.times[n - 1], b = tr.times[n];
    MixedField g{discrete_part(n, tr.u[n], b),
                 sample(cs, [&](const Vec2& x) { return time_average(f, a, b, x); })};
    MixedField dg = (1.0 / tau) * (g - g_prev);
    MixedField ddg = (1.0 / tau) * (dg - dg_prev);
    gamma += (0.5 * tau * tau) * dg + (tau * tau * tau / 12.0) * ddg;
    d.gram[n] = gram3(cs, w, dg, ddg, gamma);
    if (keep_fields) {
      d.g.push_back(g);
      d.dg.push_back(dg);
      d.ddg.push_back(ddg);
      d.gamma.push_back(gamma);
    }
    g_prev = std::move(g);
    dg_prev = std::move(dg);
  }
  return d;
}

Eigen::Vector3d G_coefficients(int n, double t, double tau) {
  const double r = n * tau - t;
  return Eigen::Vector3d(0.5 * r * r, -(r * r * r * r / (4.0 * tau) - r * r * r / 3.0), -1.0);
}

Eigen::Vector3d G_coefficients_derivative(int n, double t, double tau) {
  const double r = n * tau - t;
  return Eigen::Vector3d(-r, r * r * r / tau - r * r, 0.0);
}

MixedField eval_G(const ReconstructionData& d, int n, double t) {
  if (!d.has_fields()) throw std::logic_error("eval_G: reconstruction data was built without fields");
  if (n < 1 || n > d.steps) throw std::out_of_range("eval_G: level out of range");
  const Eigen::Vector3d c = G_coefficients(n, t, d.tau);
  return c[0] * d.dg[n] + c[1] * d.ddg[n] + c[2] * d.gamma[n];
}

double G_norm(const ReconstructionData& d, int n, double t) {
  if (n < 1 || n > d.steps) throw std::out_of_range("G_norm: level out of range");
  const Eigen::Vector3d c = G_coefficients(n, t, d.tau);
  return std::sqrt(std::max(0.0, c.dot(d.gram[n] * c)));
}

double linf_l2_error(const TransientTrace& tr, const SpaceTimeFunction& u, int samples) {
  if (samples < 2) throw std::invalid_argument("linf_l2_error: need at least two samples per interval");
  double worst = 0.0;
  for (int n = 1; n <= tr.steps; ++n)
    for (int k = (n == 1 ? 0 : 1); k < samples; ++k) {
      const double t = tr.times[n - 1] + tr.tau() * k / (samples - 1);
      const DgField v = eval_uN_interval(tr, n, t).value;
      worst = std::max(worst, l2_distance(v, [&](const Vec2& x) { return u(t, x); }));
    }
  return worst;
}

}  // namespace dgelast
