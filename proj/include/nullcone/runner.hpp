#pragma once

#include <string>

#include "nullcone/config.hpp"
#include "nullcone/grid.hpp"

namespace nullcone {

// Initial graph surface from the config: base profile (constant sigma or
// a boosted sphere) plus explicit and seeded random band-limited
// perturbations.
Array build_initial_surface(const SphereGrid& grid, const InitialConfig& init,
                            unsigned long long seed);

// Execute a configured task and persist its artifacts into out_dir:
// manifest run.json (written up-front with completed=false and finalized
// at the end), series.csv, field_tNNNN.sphere snapshots, and one
// report_<name>.json per result block.  Returns the process exit status:
// 0 on success, 2 when a flow stops on the step budget, 1 otherwise.
int run_task(const RunConfig& cfg, const std::string& out_dir);

}  // namespace nullcone
