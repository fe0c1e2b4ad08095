// Command-line front end: single solves, convergence studies and the
// invariant suite.
#include "dgelast/config.hpp"
#include "dgelast/invariants.hpp"
#include "dgelast/studies.hpp"
#include "dgelast/vtk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dgelast;

namespace {

struct Global {
  int threads = 1;
  std::string output;
  bool quadrature_check = false;
};

StudyConfig load(const std::string& path, const Global& g) {
  StudyConfig cfg = read_config_file(path);
  if (g.quadrature_check) cfg.quadrature_check = true;
  if (!g.output.empty()) cfg.output_dir = g.output;
  fs::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const StudyConfig& cfg, const std::string& suffix) {
  return (fs::path(cfg.output_dir) / (cfg.output_prefix + suffix)).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void solve_stationary_cmd(const StudyConfig& cfg) {
  const ManufacturedCase c = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
  const int n = cfg.mesh_sizes.front(), r = cfg.degrees.front();
  const StationaryRun run = run_stationary(c, n, r, cfg, true);
  const double cal = cfg.calibration > 0.0 ? cfg.calibration : 1.0;
  const EstimatorBreakdown& est = cfg.estimator == EstimatorVariant::duality ? run.duality : run.energy;
  {
    auto o = open_out(out_path(cfg, "_mesh.txt"));
    write_mesh(o, run.solution->space().mesh());
  }
  {
    auto o = open_out(out_path(cfg, "_field.txt"));
    write_field(o, *run.solution);
  }
  write_vtk_file(out_path(cfg, ".vtk"), run.solution->space().mesh(), {{"u", &*run.solution}},
                 {{"eta", cal * est.eta}});
  nlohmann::json j{{"case", c.name},         {"n", n},
                   {"degree", r},            {"dofs", run.dofs},
                   {"h", run.h},             {"alpha", run.alpha},
                   {"c_inv", run.c_inv},     {"error", run.error},
                   {"calibration", cal},     {"estimator", to_string(cfg.estimator)},
                   {"E", cal * est.value},   {"E_duality_raw", run.duality.value},
                   {"E_energy_raw", run.energy.value}, {"config_hash", cfg.hash()}};
  auto o = open_out(out_path(cfg, "_summary.json"));
  o << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
}

void solve_transient_cmd(const StudyConfig& cfg) {
  const ManufacturedCase c = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
  const int n = cfg.mesh_sizes.front(), r = cfg.degrees.front(), steps = cfg.steps.front();
  const Scenario sc = cfg.scenario == "refine_half" ? Scenario::refine_half : Scenario::constant;
  const double cal = cfg.calibration > 0.0 ? cfg.calibration : fit_calibration(cfg.estimator, r, cfg);
  const TransientRun run = run_transient(c, n, r, steps, sc, cfg, cal, true);
  {
    auto o = open_out(out_path(cfg, "_levels.csv"));
    write_report_csv(o, run.report);
  }
  {
    auto o = open_out(out_path(cfg, "_trace.txt"));
    write_trace(o, *run.trace);
  }
  const DgField& last = run.trace->u.back();
  write_vtk_file(out_path(cfg, ".vtk"), last.space().mesh(), {{"u", &last}}, {{"eta", run.report.final_eta}});
  std::ostringstream js;
  write_report_json(js, run.report);
  nlohmann::json j = nlohmann::json::parse(js.str());
  j["error"] = run.error;
  j["effectivity"] = run.error > 0 ? run.report.total / run.error : 0.0;
  j["scenario"] = to_string(sc);
  j["n"] = n;
  j["degree"] = r;
  j["steps"] = steps;
  auto o = open_out(out_path(cfg, "_summary.json"));
  o << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
}

void study_stationary_cmd(const StudyConfig& cfg) {
  const StationaryStudy s = run_stationary_study(cfg);
  auto o = open_out(out_path(cfg, "_stationary.csv"));
  write_stationary_csv(o, s);
  write_stationary_csv(std::cout, s);
  nlohmann::json j{{"config_hash", s.config_hash},
                   {"calibration_duality", s.calibration_duality},
                   {"calibration_energy", s.calibration_energy}};
  auto js = open_out(out_path(cfg, "_stationary.json"));
  js << j.dump(2) << "\n";
}

void study_transient_cmd(const StudyConfig& cfg) {
  const TransientStudy s = run_transient_study(cfg);
  auto o = open_out(out_path(cfg, "_transient.csv"));
  write_transient_csv(o, s);
  write_transient_csv(std::cout, s);
  nlohmann::json j{{"config_hash", s.config_hash}, {"calibration", s.calibration}};
  auto js = open_out(out_path(cfg, "_transient.json"));
  js << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG solver and a posteriori error bounds for linear elasticity"};
  Global g;
  app.add_option("--threads", g.threads, "worker threads for matrix-vector products")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "output directory (overrides output_dir)");
  app.add_flag("--quadrature-check", g.quadrature_check, "double time quadrature orders and report drift");
  app.require_subcommand(1);

  std::string cfg_path;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", cfg_path, "key = value config file")->required()->check(CLI::ExistingFile);
    return sub;
  };
  auto* ss = add("solve-stationary", "one stationary solve with estimators and VTK output");
  auto* st = add("solve-transient", "one transient run with the full indicator report");
  auto* ys = add("study-stationary", "mesh convergence and effectivity table");
  auto* yt = add("study-transient", "time-step convergence table for the configured scenarios");
  auto* ci = app.add_subcommand("check-invariants", "run the property suite on small meshes");
  std::uint64_t seed = 7;
  ci->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);
  set_num_threads(g.threads);
  try {
    if (ci->parsed()) {
      const auto results = run_invariant_checks(seed);
      print_invariant_results(std::cout, results);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
    const StudyConfig cfg = load(cfg_path, g);
    if (ss->parsed()) solve_stationary_cmd(cfg);
    if (st->parsed()) solve_transient_cmd(cfg);
    if (ys->parsed()) study_stationary_cmd(cfg);
    if (yt->parsed()) study_transient_cmd(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
