#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nullcone/config.hpp"
#include "nullcone/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for spacelike cross-sections of "
               "spherically symmetric null cones"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;

  for (const char* name : {"verify", "flow", "solve", "foliate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "override the config seed");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    nullcone::RunConfig cfg =
        nullcone::parse_config(read_file(config_path));
    const std::string kind = app.get_subcommands().front()->get_name();
    if (cfg.task.kind != kind) {
      std::cerr << "config error at task.kind: config declares '"
                << cfg.task.kind << "' but subcommand is '" << kind << "'\n";
      return 1;
    }
    if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
    return nullcone::run_task(cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
