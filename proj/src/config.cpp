#include "nullcone/config.hpp"

#include <set>
#include <stdexcept>

namespace nullcone {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& path,
                 const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    fail(path + "." + key, "expected an integer");
  return obj[key].get<long>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config syntax error: ") +
                                e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config must be object");
  check_keys(root, "$", {"model", "grid", "initial", "task", "seed"});

  RunConfig cfg;

  // model
  if (!root.contains("model")) fail("$.model", "missing");
  const json& model = root["model"];
  check_keys(model, "model", {"type", "mass", "q", "r_min"});
  cfg.model_type = get_string(model, "model", "type", "");
  if (cfg.model_type == "minkowski") {
    cfg.model.mass = 0.0;
  } else if (cfg.model_type == "schwarzschild") {
    cfg.model.mass = get_number(model, "model", "mass", 1.0);
  } else if (cfg.model_type == "generalized") {
    cfg.model.mass = get_number(model, "model", "mass", 1.0);
    if (model.contains("q")) {
      const json& q = model["q"];
      check_keys(q, "model.q", {"kind", "coeff"});
      cfg.model.q_kind = get_string(q, "model.q", "kind", "none");
      if (cfg.model.q_kind != "none" && cfg.model.q_kind != "inverse_square")
        fail("model.q.kind", "must be none or inverse_square");
      cfg.model.q_coeff = get_number(q, "model.q", "coeff", 0.0);
    }
  } else {
    fail("model.type", "must be minkowski, schwarzschild, or generalized");
  }
  if ((cfg.model_type != "generalized") && model.contains("q"))
    fail("model.q", "only allowed for generalized models");
  cfg.model.r_min = get_number(model, "model", "r_min", 0.0);

  // grid
  if (root.contains("grid")) {
    const json& grid = root["grid"];
    check_keys(grid, "grid", {"bandlimit"});
    cfg.bandlimit = int(get_integer(grid, "grid", "bandlimit", 32));
    if (cfg.bandlimit < 1 || cfg.bandlimit > 256)
      fail("grid.bandlimit", "must be in [1, 256]");
  }

  // initial
  if (root.contains("initial")) {
    const json& init = root["initial"];
    check_keys(init, "initial",
               {"profile", "sigma", "perturbations", "random", "rho", "a"});
    cfg.initial.profile = get_string(init, "initial", "profile", "perturbed");
    if (cfg.initial.profile != "perturbed" &&
        cfg.initial.profile != "boosted")
      fail("initial.profile", "must be perturbed or boosted");
    cfg.initial.sigma = get_number(init, "initial", "sigma", 20.0);
    if (cfg.initial.sigma <= 0.0) fail("initial.sigma", "must be positive");
    if (init.contains("perturbations")) {
      if (!init["perturbations"].is_array())
        fail("initial.perturbations", "expected an array");
      int idx = 0;
      for (const json& p : init["perturbations"]) {
        const std::string path =
            "initial.perturbations[" + std::to_string(idx++) + "]";
        check_keys(p, path, {"l", "m", "amplitude"});
        Perturbation pert;
        pert.l = int(get_integer(p, path, "l", 0));
        pert.m = int(get_integer(p, path, "m", 0));
        pert.amplitude = get_number(p, path, "amplitude", 0.0);
        if (pert.l < 0 || std::abs(pert.m) > pert.l)
          fail(path, "need l >= 0 and |m| <= l");
        cfg.initial.perturbations.push_back(pert);
      }
    }
    if (init.contains("random")) {
      const json& r = init["random"];
      check_keys(r, "initial.random", {"count", "max_degree", "amplitude"});
      cfg.initial.random_count =
          int(get_integer(r, "initial.random", "count", 0));
      cfg.initial.random_max_degree =
          int(get_integer(r, "initial.random", "max_degree", 8));
      cfg.initial.random_amplitude =
          get_number(r, "initial.random", "amplitude", 0.0);
    }
    cfg.initial.rho = get_number(init, "initial", "rho", cfg.initial.sigma);
    if (init.contains("a")) {
      if (!init["a"].is_array() || init["a"].size() != 3)
        fail("initial.a", "expected an array of three numbers");
      for (int i = 0; i < 3; ++i)
        cfg.initial.a[i] = init["a"][i].get<double>();
    }
  }

  // task
  if (!root.contains("task")) fail("$.task", "missing");
  const json& task = root["task"];
  check_keys(task, "task",
             {"kind", "tolerance", "cfl", "tol", "max_steps", "t_max",
              "snapshot_stride", "max_iter", "sigma_min", "sigma_max",
              "delta_sigma"});
  cfg.task.kind = get_string(task, "task", "kind", "");
  if (cfg.task.kind != "verify" && cfg.task.kind != "flow" &&
      cfg.task.kind != "solve" && cfg.task.kind != "foliate")
    fail("task.kind", "must be verify, flow, solve, or foliate");
  cfg.task.tolerance = get_number(task, "task", "tolerance", 1e-8);
  cfg.task.cfl = get_number(task, "task", "cfl", 0.5);
  if (cfg.task.cfl <= 0.0 || cfg.task.cfl > 1.0)
    fail("task.cfl", "must be in (0, 1]");
  if (cfg.task.kind == "flow")
    cfg.task.flow_tol = get_number(task, "task", "tol", 1e-9);
  else
    cfg.task.solve_tol = get_number(task, "task", "tol", 1e-12);
  cfg.task.max_steps = get_integer(task, "task", "max_steps", 2000000);
  cfg.task.t_max = get_number(task, "task", "t_max", 1e9);
  cfg.task.snapshot_stride =
      int(get_integer(task, "task", "snapshot_stride", 0));
  cfg.task.max_iter = int(get_integer(task, "task", "max_iter", 30));
  cfg.task.sigma_min = get_number(task, "task", "sigma_min", 15.0);
  cfg.task.sigma_max = get_number(task, "task", "sigma_max", 30.0);
  cfg.task.delta_sigma = get_number(task, "task", "delta_sigma", 1.0);
  if (cfg.task.sigma_min <= 0.0 || cfg.task.sigma_max < cfg.task.sigma_min ||
      cfg.task.delta_sigma <= 0.0)
    fail("task.sigma_min", "need 0 < sigma_min <= sigma_max, delta > 0");

  // seed
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) fail("$.seed", "expected integer");
    cfg.seed = root["seed"].get<unsigned long long>();
  }
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json model_j;
  model_j["type"] = model_type;
  model_j["mass"] = model.mass;
  model_j["r_min"] = model.r_min;
  if (model_type == "generalized")
    model_j["q"] = {{"kind", model.q_kind}, {"coeff", model.q_coeff}};

  nlohmann::json init_j;
  init_j["profile"] = initial.profile;
  init_j["sigma"] = initial.sigma;
  init_j["rho"] = initial.rho;
  init_j["a"] = {initial.a[0], initial.a[1], initial.a[2]};
  init_j["perturbations"] = nlohmann::json::array();
  for (const auto& p : initial.perturbations)
    init_j["perturbations"].push_back(
        {{"l", p.l}, {"m", p.m}, {"amplitude", p.amplitude}});
  init_j["random"] = {{"count", initial.random_count},
                      {"max_degree", initial.random_max_degree},
                      {"amplitude", initial.random_amplitude}};

  nlohmann::json task_j;
  task_j["kind"] = task.kind;
  task_j["tolerance"] = task.tolerance;
  task_j["cfl"] = task.cfl;
  task_j["tol"] = task.kind == "flow" ? task.flow_tol : task.solve_tol;
  task_j["max_steps"] = task.max_steps;
  task_j["t_max"] = task.t_max;
  task_j["snapshot_stride"] = task.snapshot_stride;
  task_j["max_iter"] = task.max_iter;
  task_j["sigma_min"] = task.sigma_min;
  task_j["sigma_max"] = task.sigma_max;
  task_j["delta_sigma"] = task.delta_sigma;

  return nlohmann::json{{"model", model_j},
                        {"grid", {{"bandlimit", bandlimit}}},
                        {"initial", init_j},
                        {"task", task_j},
                        {"seed", seed}};
}

}  // namespace nullcone
