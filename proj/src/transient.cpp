#include "dgelast/transient.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace dgelast {

bool TransientTrace::constant_mesh() const {
  return std::all_of(schedule.begin(), schedule.end(), [&](int s) { return s == schedule.front(); });
}

DgField TransientTrace::to_common(const DgField& f) const { return l2_project_cross_mesh(*family, f, common); }

DgField TransientTrace::to_level(const DgField& f, int n) const {
  return l2_project_cross_mesh(*family, f, level_space(n));
}

DgField TransientTrace::ddu(int n) const {
  if (n < 1 || n > steps) throw std::out_of_range("ddu: level out of range");
  DgField d = du[n] - du[n - 1];
  d *= 1.0 / tau();
  return d;
}

TransientTrace prepare_trace(const ProblemSpec& p) {
  if (!p.family) throw std::invalid_argument("ProblemSpec: no mesh family");
  if (p.steps < 1) throw std::invalid_argument("ProblemSpec: steps must be positive");
  if (!(p.final_time > 0.0)) throw std::invalid_argument("ProblemSpec: final time must be positive");
  TransientTrace tr;
  tr.family = p.family;
  tr.degree = p.degree;
  tr.final_time = p.final_time;
  tr.steps = p.steps;
  tr.schedule = p.schedule.empty() ? std::vector<int>(p.steps + 1, 0) : p.schedule;
  if (static_cast<int>(tr.schedule.size()) != p.steps + 1)
    throw std::invalid_argument("ProblemSpec: schedule needs one mesh id per level");
  int finest = 0;
  for (int s : tr.schedule) {
    if (s < 0 || s >= p.family->size()) throw IncompatibleError("ProblemSpec: schedule names a missing family member");
    finest = std::max(finest, s);
    if (!tr.spaces.count(s)) tr.spaces[s] = std::make_shared<const DgSpace>(p.family->mesh_ptr(s), p.degree);
  }
  tr.common = tr.spaces.at(finest);
  for (const auto& [id, sp] : tr.spaces) tr.c_inv = std::max(tr.c_inv, estimate_inverse_constant(*sp));
  tr.times.resize(p.steps + 1);
  for (int n = 0; n <= p.steps; ++n) tr.times[n] = n * p.tau();
  tr.times[p.steps] = p.final_time;
  return tr;
}

SparseOperator level_stiffness(const TransientTrace& trace, const StiffnessTensor& mat, int member) {
  return assemble_ah(*trace.spaces.at(member), mat, PenaltyConfig{trace.alpha});
}

TransientTrace backward_euler_run(const ProblemSpec& p, const TransientOptions& opts) {
  if (!p.material) throw std::invalid_argument("ProblemSpec: no material");
  TransientTrace tr = prepare_trace(p);
  const StiffnessTensor& mat = *p.material;
  tr.alpha = p.alpha > 0.0 ? p.alpha : default_penalty(tr.c_inv, mat).alpha;

  if (opts.check_initial_trace) {
    const Mesh& m0 = tr.level_space(0)->mesh();
    const LineRule rule = line_rule(2 * p.degree + 2);
    for (const Face& f : m0.faces()) {
      if (!f.boundary()) continue;
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2 x = m0.vertex(f.vertices[0]) + rule.points[q] * (m0.vertex(f.vertices[1]) - m0.vertex(f.vertices[0]));
        if (p.u0(x).norm() > 1e-10) throw std::invalid_argument("initial displacement does not vanish on the boundary");
      }
    }
  }

  const double tau = p.tau();
  tr.u.push_back(l2_project_function(tr.level_space(0), p.u0));
  tr.du.push_back(tr.to_common(l2_project_function(tr.level_space(0), p.u1)));
  tr.iterations.push_back(0);

  std::map<int, SparseOperator> systems;
  SolveOptions so = opts.solver;
  for (int n = 1; n <= p.steps; ++n) {
    const int member = tr.schedule[n];
    const SpacePtr& sp = tr.spaces.at(member);
    if (!systems.count(member)) systems[member] = level_stiffness(tr, mat, member).shifted(1.0 / (tau * tau));
    const double tn = tr.times[n];
    const Vector load = l2_project_function(sp, [&](const Vec2& x) { return p.f(tn, x); }).coeffs();
    const DgField prev = tr.to_level(tr.u[n - 1], n);
    const DgField vel = tr.to_level(tr.du[n - 1], n);
    const Vector rhs = load + (prev.coeffs() + tau * vel.coeffs()) / (tau * tau);
    if (so.block_size == 0) so.block_size = sp->element_dofs();
    SolveResult res;
    try {
      res = solve_spd(systems[member], rhs, so);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(std::string(e.what()) + " at step " + std::to_string(n), e.residual(), e.iterations());
    }
    tr.u.emplace_back(sp, std::move(res.x));
    DgField d = tr.u_common(n) - tr.u_common(n - 1);
    d *= 1.0 / tau;
    tr.du.push_back(std::move(d));
    tr.iterations.push_back(res.iterations);
  }
  return tr;
}

std::vector<double> discrete_energy(const TransientTrace& trace, const StiffnessTensor& mat) {
  if (!trace.constant_mesh()) throw IncompatibleError("discrete_energy: schedule is not constant");
  const SparseOperator k = level_stiffness(trace, mat, trace.schedule.front());
  std::vector<double> e;
  for (int n = 0; n <= trace.steps; ++n) {
    const Vector& u = trace.u[n].coeffs();
    e.push_back(0.5 * trace.du[n].coeffs().squaredNorm() + 0.5 * u.dot(k * u));
  }
  return e;
}

void write_trace(std::ostream& out, const TransientTrace& tr) {
  std::ostringstream s;
  s.precision(17);
  const int members = *std::max_element(tr.schedule.begin(), tr.schedule.end()) + 1;
  s << "dgelast-trace 1\n";
  s << "degree " << tr.degree << " alpha " << tr.alpha << " cinv " << tr.c_inv << " final_time " << tr.final_time
    << " steps " << tr.steps << "\n";
  s << "members " << members << "\n";
  for (int m = 0; m < members; ++m) write_mesh(s, tr.family->mesh(m));
  s << "schedule";
  for (int v : tr.schedule) s << " " << v;
  s << "\n";
  for (int n = 0; n <= tr.steps; ++n) {
    s << "level " << n << " time " << tr.times[n] << "\n";
    s << "u\n";
    write_field(s, tr.u[n]);
    s << "du\n";
    write_field(s, tr.du[n]);
  }
  out << s.str();
}

TransientTrace read_trace(std::istream& in) {
  auto expect = [&](const std::string& word) {
    std::string w;
    if (!(in >> w) || w != word) throw std::runtime_error("read_trace: expected '" + word + "'");
  };
  int version = 0;
  expect("dgelast-trace");
  in >> version;
  if (version != 1) throw std::runtime_error("read_trace: unsupported version");
  TransientTrace tr;
  expect("degree");
  in >> tr.degree;
  expect("alpha");
  in >> tr.alpha;
  expect("cinv");
  in >> tr.c_inv;
  expect("final_time");
  in >> tr.final_time;
  expect("steps");
  in >> tr.steps;
  int members = 0;
  expect("members");
  in >> members;
  if (!in || members < 1 || tr.steps < 1) throw std::runtime_error("read_trace: bad header");
  std::vector<Mesh> meshes;
  for (int m = 0; m < members; ++m) meshes.push_back(read_mesh(in));
  tr.family = std::make_shared<const MeshFamily>(MeshFamily::from_meshes(std::move(meshes)));
  expect("schedule");
  tr.schedule.resize(tr.steps + 1);
  for (int& v : tr.schedule)
    if (!(in >> v) || v < 0 || v >= members) throw std::runtime_error("read_trace: bad schedule");
  int finest = 0;
  for (int v : tr.schedule) {
    finest = std::max(finest, v);
    if (!tr.spaces.count(v)) tr.spaces[v] = std::make_shared<const DgSpace>(tr.family->mesh_ptr(v), tr.degree);
  }
  tr.common = tr.spaces.at(finest);
  for (int n = 0; n <= tr.steps; ++n) {
    int level = -1;
    double t = 0.0;
    expect("level");
    in >> level;
    expect("time");
    in >> t;
    if (!in || level != n) throw std::runtime_error("read_trace: levels out of order");
    tr.times.push_back(t);
    expect("u");
    tr.u.push_back(read_field(in, tr.level_space(n)));
    expect("du");
    tr.du.push_back(read_field(in, tr.common));
    tr.iterations.push_back(0);
  }
  return tr;
}

}  // namespace dgelast
