#include "nullcone/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "nullcone/boost.hpp"
#include "nullcone/cross_section.hpp"
#include "nullcone/flow.hpp"
#include "nullcone/foliation.hpp"
#include "nullcone/identities.hpp"
#include "nullcone/io.hpp"
#include "nullcone/jacobi.hpp"

namespace nullcone {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

void write_manifest(const std::string& out_dir, const RunConfig& cfg,
                    bool completed, const std::string& reason,
                    double wall_seconds, int exit_code) {
  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = cfg.to_json();
  manifest["completed"] = completed;
  manifest["termination"] = reason;
  manifest["wall_seconds"] = wall_seconds;
  manifest["exit_code"] = exit_code;
  const char* threads = std::getenv("NULLCONE_THREADS");
  manifest["thread_cap"] = threads ? std::atoi(threads) : 0;
  write_text(out_dir + "/run.json", manifest.dump(2) + "\n");
}

json residual_to_json(const ResidualReport& r) {
  return json{{"name", r.name},
              {"max_residual", r.max_residual},
              {"scale", r.scale},
              {"relative", r.relative},
              {"bandlimit", r.bandlimit}};
}

std::string snapshot_name(long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "field_t%04ld.sphere", index);
  return buf;
}

int run_verify(const RunConfig& cfg, const GridPtr& grid,
               const std::string& out_dir) {
  const Array omega = build_initial_surface(*grid, cfg.initial, cfg.seed);
  const CrossSection cs(grid, cfg.model, omega);

  const ResidualReport reports[3] = {gauss_residual(cs),
                                     codazzi_residual_full(cs),
                                     simon_residual_full(cs)};
  bool pass = true;
  for (const auto& r : reports) {
    json j = residual_to_json(r);
    j["pass"] = r.relative <= cfg.task.tolerance;
    pass = pass && r.relative <= cfg.task.tolerance;
    write_text(out_dir + "/report_" + r.name + ".json", j.dump(2) + "\n");
  }
  write_sphere_field(out_dir + "/" + snapshot_name(0), *grid, omega);
  return pass ? 0 : 1;
}

void write_flow_series(const std::string& path,
                       const std::vector<FlowSample>& series) {
  std::string csv =
      "step,t,area,h2_mean,h2_dev_l2,h2_dev_sup,omega_min,omega_max\n";
  for (const auto& s : series) {
    csv += std::to_string(s.step) + "," + format_double(s.t) + "," +
           format_double(s.area) + "," + format_double(s.h2_mean) + "," +
           format_double(s.h2_dev_l2) + "," + format_double(s.h2_dev_sup) +
           "," + format_double(s.omega_min) + "," +
           format_double(s.omega_max) + "\n";
  }
  write_text(path, csv);
}

int run_flow_task(const RunConfig& cfg, const GridPtr& grid,
                  const std::string& out_dir) {
  const Array omega0 = build_initial_surface(*grid, cfg.initial, cfg.seed);

  FlowOptions opts;
  opts.cfl = cfg.task.cfl;
  opts.tol = cfg.task.flow_tol;
  opts.t_max = cfg.task.t_max;
  opts.max_steps = cfg.task.max_steps;

  long snapshot_index = 0;
  FlowCallback snapshot;
  const int stride = cfg.task.snapshot_stride;
  if (stride > 0) {
    snapshot = [&](long step, double, const Array& omega) {
      if (step % stride == 0)
        write_sphere_field(out_dir + "/" + snapshot_name(snapshot_index++),
                           *grid, omega);
    };
  }

  write_sphere_field(out_dir + "/" + snapshot_name(snapshot_index++), *grid,
                     omega0);
  FlowResult result = run_flow(grid, cfg.model, omega0, opts, snapshot);
  write_sphere_field(out_dir + "/" + snapshot_name(snapshot_index), *grid,
                     result.omega);
  write_flow_series(out_dir + "/series.csv", result.series);

  json report;
  report["status"] = static_cast<int>(result.status);
  report["steps"] = result.steps;
  report["t_final"] = result.t;
  report["area_drift_rel"] = result.area_drift_rel;
  switch (result.status) {
    case FlowStatus::Converged: report["reason"] = "converged"; break;
    case FlowStatus::MaxSteps:  report["reason"] = "max_steps"; break;
    case FlowStatus::TMax:      report["reason"] = "t_max"; break;
  }
  if (result.status == FlowStatus::Converged) {
    try {
      report["decay_rate"] = measure_decay(result.series);
    } catch (const std::exception&) {
      report["decay_rate"] = nullptr;
    }
    const RoundnessReport round = roundness_report(*grid, result.omega);
    report["rho"] = round.rho;
    report["a"] = {round.a[0], round.a[1], round.a[2]};
  }
  write_text(out_dir + "/report_flow.json", report.dump(2) + "\n");
  return static_cast<int>(result.status);
}

int run_solve(const RunConfig& cfg, const GridPtr& grid,
              const std::string& out_dir) {
  const Array omega0 = build_initial_surface(*grid, cfg.initial, cfg.seed);
  write_sphere_field(out_dir + "/" + snapshot_name(0), *grid, omega0);

  NewtonOptions opts;
  opts.tol = cfg.task.solve_tol;
  opts.max_iter = cfg.task.max_iter;
  NewtonResult result = newton_stcmc(grid, cfg.model, omega0, opts);
  write_sphere_field(out_dir + "/" + snapshot_name(1), *grid, result.omega);

  std::string csv = "iteration,residual_sup\n";
  for (size_t i = 0; i < result.residual_history.size(); ++i)
    csv += std::to_string(i) + "," +
           format_double(result.residual_history[i]) + "\n";
  write_text(out_dir + "/series.csv", csv);

  const RoundnessReport round = roundness_report(*grid, result.omega);
  json report;
  report["converged"] = result.converged;
  report["iterations"] = result.iterations;
  report["h2_value"] = result.h2_value;
  report["residual_history"] = result.residual_history;
  report["rho"] = round.rho;
  report["a"] = {round.a[0], round.a[1], round.a[2]};
  write_text(out_dir + "/report_solve.json", report.dump(2) + "\n");
  return result.converged ? 0 : 1;
}

int run_foliate(const RunConfig& cfg, const GridPtr& grid,
                const std::string& out_dir) {
  FoliationOptions opts;
  opts.sigma_min = cfg.task.sigma_min;
  opts.sigma_max = cfg.task.sigma_max;
  opts.delta_sigma = cfg.task.delta_sigma;
  opts.newton.tol = cfg.task.solve_tol;
  opts.newton.max_iter = cfg.task.max_iter;

  const FoliationResult result = build_foliation(grid, cfg.model, opts);
  const FoliationCheck check = check_foliation(result, cfg.model);

  std::string csv = "sigma,h2,rho,a_norm,gap_margin\n";
  for (size_t i = 0; i < result.leaves.size(); ++i) {
    const Leaf& leaf = result.leaves[i];
    double gap = 0.0;
    if (i > 0)
      gap = (leaf.omega - result.leaves[i - 1].omega).minCoeff();
    csv += format_double(leaf.sigma) + "," + format_double(leaf.h2) + "," +
           format_double(leaf.rho) + "," + format_double(leaf.a.norm()) +
           "," + format_double(gap) + "\n";
    write_sphere_field(out_dir + "/" + snapshot_name(long(i)), *grid,
                       leaf.omega);
  }
  write_text(out_dir + "/series.csv", csv);

  json report;
  report["complete"] = result.complete;
  report["leaf_count"] = result.leaves.size();
  report["nested"] = check.nested;
  report["h2_decreasing"] = check.h2_decreasing;
  report["min_gap"] = check.min_gap;
  report["max_profile_dev"] = check.max_profile_dev;
  report["max_sigma_a"] = check.max_sigma_a;
  report["bondi_energy"] = result.bondi_energy;
  report["bondi_momentum"] = {result.bondi_momentum[0],
                              result.bondi_momentum[1],
                              result.bondi_momentum[2]};
  write_text(out_dir + "/report_foliation.json", report.dump(2) + "\n");
  return (result.complete && check.nested && check.h2_decreasing) ? 0 : 1;
}

}  // namespace

Array build_initial_surface(const SphereGrid& grid, const InitialConfig& init,
                            unsigned long long seed) {
  Array omega;
  if (init.profile == "boosted") {
    Vec3 a(init.a[0], init.a[1], init.a[2]);
    omega = boosted_profile(grid, init.rho, a);
  } else {
    omega = Array::Constant(grid.n_nodes(), init.sigma);
  }
  for (const Perturbation& p : init.perturbations)
    omega += p.amplitude * grid.harmonic(p.l, p.m);
  if (init.random_count > 0 && init.random_amplitude != 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_l(
        1, std::max(1, init.random_max_degree));
    std::uniform_real_distribution<double> pick_amp(-init.random_amplitude,
                                                    init.random_amplitude);
    for (int k = 0; k < init.random_count; ++k) {
      const int l = pick_l(rng);
      std::uniform_int_distribution<int> pick_m(-l, l);
      const int m = pick_m(rng);
      omega += pick_amp(rng) * grid.harmonic(l, m);
    }
  }
  if (omega.minCoeff() <= 0.0)
    throw std::invalid_argument("initial surface is not positive");
  return omega;
}

int run_task(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  write_manifest(out_dir, cfg, false, "running", 0.0, -1);

  int status = 1;
  std::string reason = "ok";
  try {
    auto grid = std::make_shared<const SphereGrid>(cfg.bandlimit);
    if (cfg.task.kind == "verify")
      status = run_verify(cfg, grid, out_dir);
    else if (cfg.task.kind == "flow")
      status = run_flow_task(cfg, grid, out_dir);
    else if (cfg.task.kind == "solve")
      status = run_solve(cfg, grid, out_dir);
    else
      status = run_foliate(cfg, grid, out_dir);
    if (status == 2)
      reason = "max_steps";
    else if (status == 3)
      reason = "t_max";
    else if (status != 0)
      reason = "gate_failed";
  } catch (const std::exception& e) {
    status = 1;
    reason = std::string("error: ") + e.what();
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(out_dir, cfg, true, reason, wall, status);
  return status;
}

}  // namespace nullcone
