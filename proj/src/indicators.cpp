#include "dgelast/indicators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dgelast {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRoundoff = 1e-12;

// (I - Pi^n) x for x on the common space.
Vector projection_defect(const TransientTrace& tr, const DgField& x, int n) {
  return x.coeffs() - tr.to_common(tr.to_level(x, n)).coeffs();
}

double qp_l2(const DgSpace& sp, const Eigen::MatrixX2d& v) {
  const int nq = sp.volume_rule().size();
  double s = 0.0;
  for (int k = 0; k < sp.num_elements(); ++k)
    for (int q = 0; q < nq; ++q) s += sp.quad_weight(k, q) * v.row(k * nq + q).squaredNorm();
  return std::sqrt(s);
}

void ensure_rows(std::vector<LevelRow>* rows, const TransientTrace& tr) {
  if (rows && static_cast<int>(rows->size()) != tr.steps + 1) {
    rows->assign(tr.steps + 1, LevelRow{});
    for (int n = 0; n <= tr.steps; ++n) (*rows)[n].time = tr.times[n];
  }
}

}  // namespace

double zeta_mc(const TransientTrace& tr, double tolerance, std::vector<LevelRow>* rows) {
  ensure_rows(rows, tr);
  const double tau = tr.tau();
  double total = 0.0;
  for (int n = 1; n <= tr.steps; ++n) {
    const DgField ddu = tr.ddu(n);
    Vector a = projection_defect(tr, tr.du[n], n);
    Vector b = projection_defect(tr, ddu, n);
    // defects at roundoff level (e.g. injection onto a refined mesh) are exactly zero
    if (a.norm() <= kRoundoff * tr.du[n].coeffs().norm()) a.setZero();
    if (b.norm() <= kRoundoff * ddu.coeffs().norm()) b.setZero();
    const double aa = a.squaredNorm(), ab = a.dot(b), bb = b.squaredNorm();
    double integral = 0.0;
    if (aa > 0.0 || bb > 0.0) {
      const auto defect = [&](double s) {
        const double r = tau - s;
        const double p = (r * r - 2.0 * s * r) / tau;  // d_t u_N = du^n - p ddu^n
        return std::sqrt(std::max(0.0, aa - 2.0 * p * ab + p * p * bb));
      };
      integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(defect, 0.0, tau, 20,
                                                                               std::max(tolerance, 1e-14));
    }
    total += integral;
    if (rows) (*rows)[n].mc_integral = integral;
  }
  for (int n = 1; n <= tr.steps - 1; ++n) {
    const Vector next = tr.to_common(tr.to_level(tr.du[n], n + 1)).coeffs();
    const Vector cur = tr.to_common(tr.to_level(tr.du[n], n)).coeffs();
    const double d = (next - cur).norm();
    const double jump = d <= kRoundoff * tr.du[n].coeffs().norm() ? 0.0 : (tr.times[tr.steps] - tr.times[n]) * d;
    total += jump;
    if (rows) (*rows)[n].mc_jump = jump;
  }
  return total;
}

double zeta_evo(const ReconstructionData& d, int points, std::vector<LevelRow>* rows) {
  const LineRule rule = gauss_legendre(points);
  double total = 0.0;
  for (int n = 1; n <= d.steps; ++n) {
    double integral = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      integral += rule.weights[q] * d.tau * G_norm(d, n, (n - 1 + rule.points[q]) * d.tau);
    total += integral;
    if (rows && static_cast<int>(rows->size()) > n) (*rows)[n].evo_integral = integral;
  }
  return total;
}

double zeta_osc(const TransientTrace& tr, const SpaceTimeFunction& f, int points, std::vector<LevelRow>* rows) {
  ensure_rows(rows, tr);
  const DgSpace& cs = *tr.common;
  const double tau = tr.tau();
  const LineRule rule = gauss_legendre(points);
  double total = 0.0;
  for (int n = 1; n <= tr.steps; ++n) {
    const double a = tr.times[n - 1], b = tr.times[n];
    const Eigen::MatrixX2d avg = sample(cs, [&](const Vec2& x) { return time_average(f, a, b, x); });
    double integral = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double t = a + rule.points[q] * (b - a);
      const Eigen::MatrixX2d diff = avg - sample(cs, [&](const Vec2& x) { return f(t, x); });
      const double nrm = qp_l2(cs, diff);
      integral += rule.weights[q] * (b - a) * nrm * nrm;
    }
    const double term = std::sqrt(tau * tau * tau * integral) / kTwoPi;
    total += term;
    if (rows) (*rows)[n].osc = term;
  }
  return total;
}

double zeta_trec(const TransientTrace& tr, std::vector<LevelRow>* rows) {
  ensure_rows(rows, tr);
  const double tau = tr.tau();
  // int mu^2 dt = 3 tau over each interval
  const double weight = std::sqrt(3.0 * tau * tau * tau * tau) / kTwoPi;
  double total = 0.0;
  for (int n = 1; n <= tr.steps; ++n) {
    const double term = weight * tr.ddu(n).coeffs().norm();
    total += term;
    if (rows) (*rows)[n].trec = term;
  }
  return total;
}

SpatialIndicators zeta_spatial(const TransientTrace& tr, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                               const IndicatorOptions& opts, std::vector<LevelRow>* rows) {
  ensure_rows(rows, tr);
  const DgSpace& cs = *tr.common;
  const double tau = tr.tau();
  const double cf = opts.poincare > 0.0 ? opts.poincare : tr.common->mesh().domain_diameter() / std::numbers::pi;
  const double data_weight = cf * cf / mat.bounds().lower;
  std::map<int, SparseOperator> stiff;
  auto k_of = [&](int member) -> const SparseOperator& {
    auto it = stiff.find(member);
    if (it == stiff.end()) it = stiff.emplace(member, level_stiffness(tr, mat, member)).first;
    return it->second;
  };
  auto estimate = [&](const DgField& z, ResidualSource r) {
    return combine_terms(z.space().mesh(), residual_terms(z, r, mat), opts.variant, opts.calibration, tr.alpha);
  };
  // discrete part B^n v - Pi^n f(t) of the residual on level n
  auto discrete = [&](int n, const DgField& v, double t) {
    const SpacePtr& sp = tr.level_space(n);
    Vector c = k_of(tr.schedule[n]) * v.coeffs();
    c -= l2_project_function(sp, [&](const Vec2& x) { return f(t, x); }).coeffs();
    return DgField(sp, std::move(c));
  };

  SpatialIndicators s;
  s.e_ip.resize(tr.steps + 1);
  for (int n = 0; n <= tr.steps; ++n) {
    const double t = tr.times[n];
    const EstimatorBreakdown b =
        estimate(tr.u[n], ResidualSource{discrete(n, tr.u[n], t), [&](const Vec2& x) { return f(t, x); }});
    s.e_ip[n] = b.value;
    if (n == tr.steps) s.final_eta = b.eta;
    if (rows) (*rows)[n].e_ip = b.value;
  }
  {
    const DgField v0 = tr.to_level(tr.du[0], 0);
    s.e_ip_initial_velocity =
        estimate(v0, ResidualSource{discrete(0, v0, 0.0), [&](const Vec2& x) { return f(0.0, x); }}).value;
  }

  // data gaps on the common space
  std::vector<Eigen::MatrixX2d> gap(tr.steps + 1);
  gap[0] = Eigen::MatrixX2d::Zero(cs.num_elements() * cs.volume_rule().size(), 2);
  double max_term = s.e_ip[0];
  double rate_sum = 0.0;
  for (int n = 1; n <= tr.steps; ++n) {
    const double a = tr.times[n - 1], b = tr.times[n];
    gap[n] = sample(cs, [&](const Vec2& x) { return Vec2(time_average(f, a, b, x) - f(b, x)); });
    const double g = qp_l2(cs, gap[n]);
    const double gr = qp_l2(cs, gap[n] - gap[n - 1]) / tau;  // ||d ftilde^n - d f^n||
    max_term = std::max(max_term, s.e_ip[n] + 2.0 * data_weight * g);
    rate_sum += 4.0 * tau * data_weight * gr;
    if (rows) {
      (*rows)[n].data_gap = g;
      (*rows)[n].data_gap_rate = gr;
    }
  }
  s.sp1 = std::sqrt(2.0) * s.e_ip[0];
  s.sp2 = 3.0 * max_term + (4.0 * tau / 27.0) * s.e_ip_initial_velocity;
  double pair_sum = 0.0;
  for (int n = 1; n <= tr.steps; ++n) pair_sum += 2.0 * (s.e_ip[n] + s.e_ip[n - 1]);
  s.sp3 = pair_sum + rate_sum;

  if (tr.constant_mesh()) {
    double alt = 0.0;
    for (int n = 1; n <= tr.steps; ++n) {
      const double a = tr.times[n - 1], b = tr.times[n];
      // tau E_IP(du^n, dr^n) = E_IP(u^n - u^{n-1}, r^n - r^{n-1}) by linearity
      const DgField dz = tr.u[n] - tr.u[n - 1];
      const DgField dr = discrete(n, tr.u[n], b) - discrete(n - 1, tr.u[n - 1], a);
      const double e = estimate(dz, ResidualSource{dr, [&](const Vec2& x) { return Vec2(f(b, x) - f(a, x)); }}).value;
      alt += 2.0 * e;
      if (rows) (*rows)[n].e_ip_alt = e;
    }
    s.sp3_alternative = alt + rate_sum;
  }
  return s;
}

IndicatorReport total_bound(const TransientTrace& tr, const StiffnessTensor& mat, const SpaceTimeFunction& f,
                            const SpatialFunction& u0, const SpatialFunction& u1, const IndicatorOptions& opts) {
  IndicatorReport r;
  ensure_rows(&r.rows, tr);
  r.variant = opts.variant;
  r.calibration = opts.calibration;
  r.alpha = tr.alpha;
  r.c_inv = tr.c_inv;
  r.c_lower = mat.bounds().lower;
  r.poincare = opts.poincare > 0.0 ? opts.poincare : tr.common->mesh().domain_diameter() / std::numbers::pi;

  r.zeta_mc = zeta_mc(tr, opts.mc_tolerance, &r.rows);
  const ReconstructionData data = build_g_series(tr, mat, f, false);
  r.zeta_evo = zeta_evo(data, opts.evo_points, &r.rows);
  r.evo_7pt_difference = zeta_evo(data, 7) - r.zeta_evo;
  r.zeta_osc = zeta_osc(tr, f, opts.osc_points, &r.rows);
  r.zeta_trec = zeta_trec(tr, &r.rows);
  if (opts.quadrature_check) {
    r.mc_quadrature_drift = zeta_mc(tr, 1e-3 * opts.mc_tolerance) - r.zeta_mc;
    r.evo_quadrature_drift = zeta_evo(data, 2 * opts.evo_points) - r.zeta_evo;
    r.osc_quadrature_drift = zeta_osc(tr, f, 2 * opts.osc_points) - r.zeta_osc;
  }

  const SpatialIndicators sp = zeta_spatial(tr, mat, f, opts, &r.rows);
  r.zeta_sp1 = sp.sp1;
  r.zeta_sp2 = sp.sp2;
  r.zeta_sp3 = sp.sp3;
  r.zeta_sp3_alternative = sp.sp3_alternative;
  r.e_ip = sp.e_ip;
  r.e_ip_initial_velocity = sp.e_ip_initial_velocity;
  r.final_eta = sp.final_eta;
  r.used_alternative = opts.stationary_alternative && sp.sp3_alternative >= 0.0;
  r.zeta_sp = r.zeta_sp1 + r.zeta_sp2 + (r.used_alternative ? r.zeta_sp3_alternative : r.zeta_sp3);
  r.zeta_tp = 2.0 * (r.zeta_mc + r.zeta_evo + r.zeta_osc + r.zeta_trec);

  r.initial_displacement_error = l2_distance(tr.u[0], u0);
  r.initial_velocity_error = l2_distance(tr.du[0], u1);
  r.zeta_ic = std::sqrt(2.0) * r.initial_displacement_error +
              2.0 * r.poincare / std::sqrt(r.c_lower) * r.initial_velocity_error;
  r.total = r.zeta_sp + r.zeta_tp + r.zeta_ic;
  return r;
}

void write_report_csv(std::ostream& out, const IndicatorReport& r) {
  std::ostringstream s;
  s << std::setprecision(12);
  s << "n,t,e_ip,mc_integral,mc_jump,evo_integral,osc,trec,data_gap,data_gap_rate,e_ip_alt\n";
  for (size_t n = 0; n < r.rows.size(); ++n) {
    const LevelRow& w = r.rows[n];
    s << n << "," << w.time << "," << w.e_ip << "," << w.mc_integral << "," << w.mc_jump << "," << w.evo_integral
      << "," << w.osc << "," << w.trec << "," << w.data_gap << "," << w.data_gap_rate << "," << w.e_ip_alt << "\n";
  }
  out << s.str();
}

void write_report_json(std::ostream& out, const IndicatorReport& r) {
  nlohmann::json j;
  j["zeta_mc"] = r.zeta_mc;
  j["zeta_evo"] = r.zeta_evo;
  j["zeta_osc"] = r.zeta_osc;
  j["zeta_trec"] = r.zeta_trec;
  j["zeta_sp1"] = r.zeta_sp1;
  j["zeta_sp2"] = r.zeta_sp2;
  j["zeta_sp3"] = r.zeta_sp3;
  if (r.zeta_sp3_alternative >= 0.0) j["zeta_sp3_alternative"] = r.zeta_sp3_alternative;
  j["zeta_sp"] = r.zeta_sp;
  j["zeta_tp"] = r.zeta_tp;
  j["zeta_ic"] = r.zeta_ic;
  j["total"] = r.total;
  j["e_ip"] = r.e_ip;
  j["e_ip_initial_velocity"] = r.e_ip_initial_velocity;
  j["initial_errors"] = {{"displacement", r.initial_displacement_error}, {"velocity", r.initial_velocity_error}};
  j["quadrature"] = {{"evo_7pt_difference", r.evo_7pt_difference},
                     {"evo_drift", r.evo_quadrature_drift},
                     {"mc_drift", r.mc_quadrature_drift},
                     {"osc_drift", r.osc_quadrature_drift}};
  j["constants"] = {{"poincare", r.poincare}, {"c_lower", r.c_lower}, {"calibration", r.calibration},
                    {"alpha", r.alpha},       {"c_inv", r.c_inv},     {"variant", to_string(r.variant)}};
  // bound split into its spatial, temporal and initial-data parts
  j["decomposition"] = {
      {"spatial", {{"sp1", r.zeta_sp1}, {"sp2", r.zeta_sp2}, {"sp3", r.used_alternative ? r.zeta_sp3_alternative : r.zeta_sp3}}},
      {"temporal", {{"mc", 2 * r.zeta_mc}, {"evo", 2 * r.zeta_evo}, {"osc", 2 * r.zeta_osc}, {"trec", 2 * r.zeta_trec}}},
      {"initial", r.zeta_ic}};
  j["used_stationary_alternative"] = r.used_alternative;
  j["config_hash"] = r.config_hash;
  out << j.dump(2) << "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

}  // namespace dgelast
