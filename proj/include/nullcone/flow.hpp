#pragma once

#include <functional>
#include <vector>

#include "nullcone/background.hpp"
#include "nullcone/grid.hpp"

namespace nullcone {

// Area-preserving null mean curvature flow of a graph surface,
//   d omega/dt = -(1/(2 ul_theta)) (H^2 - mean H^2)
//              = -(omega/4) (H^2 - mean H^2),
// stepped with classical RK4 under a diffusive CFL bound.
struct FlowOptions {
  double cfl = 0.5;           // dt = cfl (min omega)^2 / (L(L+1))
  double tol = 1e-9;          // stop: ||H^2 - mean||_{L2(gamma)} / mean
  double t_max = 1e9;
  long max_steps = 2000000;
  int series_stride = 10;     // record every k-th step (plus first/last)
};

struct FlowSample {
  long step = 0;
  double t = 0.0;
  double area = 0.0;
  double h2_mean = 0.0;
  double h2_dev_l2 = 0.0;   // ||H^2 - mean||_{L2(gamma)}
  double h2_dev_sup = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

enum class FlowStatus { Converged = 0, MaxSteps = 2, TMax = 3 };

struct FlowResult {
  Array omega;
  double t = 0.0;
  long steps = 0;
  FlowStatus status = FlowStatus::MaxSteps;
  std::vector<FlowSample> series;
  double area_drift_rel = 0.0;  // max |area - area_0| / area_0 over the run
};

using FlowCallback =
    std::function<void(long step, double t, const Array& omega)>;

FlowResult run_flow(const GridPtr& grid, const BackgroundModel& bg,
                    Array omega0, const FlowOptions& opts,
                    const FlowCallback& snapshot = nullptr);

// Exponential decay rate of ||H^2 - mean||^2_{L2} fitted on the window
// after the deviation has dropped by a factor of 10 from its initial
// value (post-transient).  Returns the positive rate of the squared norm.
double measure_decay(const std::vector<FlowSample>& series);

}  // namespace nullcone
