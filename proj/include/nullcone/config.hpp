#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "nullcone/background.hpp"

namespace nullcone {

// One spherical-harmonic perturbation on top of the base profile.
struct Perturbation {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

struct InitialConfig {
  std::string profile = "perturbed";  // "perturbed" | "boosted"
  double sigma = 20.0;                // base radius for "perturbed"
  std::vector<Perturbation> perturbations;
  // Seeded random band-limited perturbations added on top.
  int random_count = 0;
  int random_max_degree = 8;
  double random_amplitude = 0.0;
  // "boosted" profile parameters.
  double rho = 20.0;
  double a[3] = {0.0, 0.0, 0.0};
};

struct TaskConfig {
  std::string kind;  // verify | flow | solve | foliate
  // verify
  double tolerance = 1e-8;
  // flow
  double cfl = 0.5;
  double flow_tol = 1e-9;
  long max_steps = 2000000;
  double t_max = 1e9;
  int snapshot_stride = 0;  // 0: first/last only
  // solve
  double solve_tol = 1e-12;
  int max_iter = 30;
  // foliate
  double sigma_min = 15.0;
  double sigma_max = 30.0;
  double delta_sigma = 1.0;
};

struct RunConfig {
  BackgroundModel model;
  std::string model_type = "schwarzschild";
  int bandlimit = 32;
  InitialConfig initial;
  TaskConfig task;
  unsigned long long seed = 0;

  // Config echo with all defaults materialized.
  nlohmann::json to_json() const;
};

// Strict parse: unknown keys, wrong types, and out-of-range values are
// reported with the offending key path.
RunConfig parse_config(const std::string& text);

}  // namespace nullcone
