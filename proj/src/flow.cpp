#include "nullcone/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "nullcone/cross_section.hpp"

namespace nullcone {

namespace {

// Flow velocity; the area-weighted mean makes int ul_theta v dmu_gamma
// vanish identically, so area is preserved at every stage evaluation.
Array flow_rhs(const SphereGrid& grid, const BackgroundModel& bg,
               const Array& omega) {
  Array h2;
  double mean;
  mean_curvature_fast(grid, bg, omega, h2, mean);
  return -0.25 * omega * (h2 - mean);
}

}  // namespace

FlowResult run_flow(const GridPtr& grid, const BackgroundModel& bg,
                    Array omega0, const FlowOptions& opts,
                    const FlowCallback& snapshot) {
  FlowResult res;
  Array omega = std::move(omega0);
  if (omega.minCoeff() <= 0.0)
    throw std::invalid_argument("initial omega must be positive");

  const int L = grid->bandlimit();
  const double lap_scale = double(L) * (L + 1);
  const double area0 = grid->integrate(omega.square());

  double t = 0.0;
  long step = 0;

  auto sample = [&](const Array& w) -> FlowSample {
    Array h2;
    double mean;
    mean_curvature_fast(*grid, bg, w, h2, mean);
    FlowSample s;
    s.step = step;
    s.t = t;
    s.area = grid->integrate(w.square());
    s.h2_mean = mean;
    s.h2_dev_l2 = std::sqrt(grid->integrate((h2 - mean).square() * w.square()));
    s.h2_dev_sup = (h2 - mean).abs().maxCoeff();
    s.omega_min = w.minCoeff();
    s.omega_max = w.maxCoeff();
    return s;
  };

  FlowSample s0 = sample(omega);
  res.series.push_back(s0);
  if (snapshot) snapshot(step, t, omega);

  while (true) {
    FlowSample last = res.series.back();
    if (last.h2_dev_l2 <= opts.tol * std::abs(last.h2_mean)) {
      res.status = FlowStatus::Converged;
      break;
    }
    if (step >= opts.max_steps) {
      res.status = FlowStatus::MaxSteps;
      break;
    }
    if (t >= opts.t_max) {
      res.status = FlowStatus::TMax;
      break;
    }

    double dt = opts.cfl * omega.minCoeff() * omega.minCoeff() / lap_scale;
    dt = std::min(dt, opts.t_max - t);

    // RK4 step with positivity retry: halve dt if any stage or the result
    // leaves the positive cone.
    bool ok = false;
    Array next;
    for (int attempt = 0; attempt < 30 && !ok; ++attempt) {
      Array k1 = flow_rhs(*grid, bg, omega);
      Array w2 = omega + 0.5 * dt * k1;
      if (w2.minCoeff() <= 0.0) { dt *= 0.5; continue; }
      Array k2 = flow_rhs(*grid, bg, w2);
      Array w3 = omega + 0.5 * dt * k2;
      if (w3.minCoeff() <= 0.0) { dt *= 0.5; continue; }
      Array k3 = flow_rhs(*grid, bg, w3);
      Array w4 = omega + dt * k3;
      if (w4.minCoeff() <= 0.0) { dt *= 0.5; continue; }
      Array k4 = flow_rhs(*grid, bg, w4);
      next = omega + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (next.minCoeff() > 0.0) ok = true;
      else dt *= 0.5;
    }
    if (!ok) throw std::runtime_error("flow step failed to stay positive");

    // Project back onto the band-limited space.  The stage evaluations
    // only see resolved content, so unresolved nodal residue left by the
    // pointwise nonlinearities is undamped and must be truncated.
    next = grid->synthesize(grid->analyze(next));
    if (next.minCoeff() <= 0.0)
      throw std::runtime_error("flow step failed to stay positive");

    omega = std::move(next);
    t += dt;
    ++step;

    if (step % opts.series_stride == 0 || step == opts.max_steps) {
      FlowSample s = sample(omega);
      res.series.push_back(s);
      res.area_drift_rel = std::max(res.area_drift_rel,
                                    std::abs(s.area - area0) / area0);
      if (snapshot) snapshot(step, t, omega);
    }
  }

  // Always record the final state.
  if (res.series.back().step != step) {
    res.series.push_back(sample(omega));
    res.area_drift_rel =
        std::max(res.area_drift_rel,
                 std::abs(res.series.back().area - area0) / area0);
    if (snapshot) snapshot(step, t, omega);
  }
  res.omega = std::move(omega);
  res.t = t;
  res.steps = step;
  return res;
}

double measure_decay(const std::vector<FlowSample>& series) {
  if (series.size() < 4) throw std::invalid_argument("series too short");
  const double initial = series.front().h2_dev_l2;
  // Post-transient window: after the deviation dropped by 10x.
  size_t start = series.size();
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].h2_dev_l2 <= 0.1 * initial) {
      start = i;
      break;
    }
  }
  if (start + 10 > series.size())
    throw std::invalid_argument("no post-transient window with >= 10 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  for (size_t i = start; i < series.size(); ++i) {
    if (series[i].h2_dev_l2 <= 0.0) break;
    const double x = series[i].t;
    const double y = 2.0 * std::log(series[i].h2_dev_l2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double slope =
      (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace nullcone
