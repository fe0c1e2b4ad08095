#pragma once

#include "dgelast/assembly.hpp"
#include "dgelast/linsolve.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

namespace dgelast {

/// Data of u_tt - div sigma(u) = f on (0, T), u = 0 on the boundary.
struct ProblemSpec {
  std::shared_ptr<const StiffnessTensor> material;
  SpaceTimeFunction f;
  SpatialFunction u0, u1;
  double final_time = 1.0;
  int steps = 10;
  std::shared_ptr<const MeshFamily> family;
  /// Family member used at each level n = 0..N; empty means member 0
  /// throughout.
  std::vector<int> schedule;
  int degree = 1;
  /// Penalty; <= 0 selects 2 alpha_min with C_inv measured over the
  /// members used by the schedule.
  double alpha = 0.0;

  double tau() const { return final_time / steps; }
};

struct TransientOptions {
  SolveOptions solver;
  /// Reject u0 that does not vanish on the boundary.
  bool check_initial_trace = true;
};

/// Backward Euler iterates. u[n] lives on the level space; du[n] and all
/// derived quantities live on the common space (finest member used).
struct TransientTrace {
  std::shared_ptr<const MeshFamily> family;
  int degree = 1;
  double alpha = 0.0;
  double c_inv = 0.0;
  double final_time = 0.0;
  int steps = 0;
  std::vector<int> schedule;
  std::map<int, SpacePtr> spaces;  // by family member
  SpacePtr common;
  std::vector<double> times;
  std::vector<DgField> u;
  std::vector<DgField> du;
  std::vector<int> iterations;

  double tau() const { return final_time / steps; }
  const SpacePtr& level_space(int n) const { return spaces.at(schedule.at(n)); }
  bool constant_mesh() const;
  /// Exact injection / projection onto the common or a level space.
  DgField to_common(const DgField& f) const;
  DgField to_level(const DgField& f, int n) const;
  DgField u_common(int n) const { return to_common(u.at(n)); }
  /// (du[n] - du[n-1]) / tau, n >= 1.
  DgField ddu(int n) const;
};

/// Spaces for the members used by `schedule` (normalised to N + 1 entries).
TransientTrace prepare_trace(const ProblemSpec& p);

/// Runs the scheme: (I / tau^2 + K^n) u^n = F^n + (Pi^n u^{n-1} + tau Pi^n du^{n-1}) / tau^2.
TransientTrace backward_euler_run(const ProblemSpec& p, const TransientOptions& opts = {});

/// 1/2 ||du^n||^2 + 1/2 a_h(u^n, u^n) for a constant schedule.
std::vector<double> discrete_energy(const TransientTrace& trace, const StiffnessTensor& mat);

/// Stiffness matrix of the given level (cached by member for the caller).
SparseOperator level_stiffness(const TransientTrace& trace, const StiffnessTensor& mat, int member);

/// Checkpoint format (text):
///
///     dgelast-trace 1
///     degree <r> alpha <a> cinv <c> final_time <T> steps <N>
///     members <M>
///     <mesh block>                     (M times, see write_mesh)
///     schedule <s_0> ... <s_N>
///     level <n> time <t>
///     u <field block>                  (see write_field)
///     du <field block>
///     ...                              (N + 1 levels)
void write_trace(std::ostream& out, const TransientTrace& trace);
TransientTrace read_trace(std::istream& in);

}  // namespace dgelast
