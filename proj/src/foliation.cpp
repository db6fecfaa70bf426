#include "nullcone/foliation.hpp"

#include <cmath>
#include <limits>

namespace nullcone {

namespace {

Leaf solve_leaf(const GridPtr& grid, const BackgroundModel& bg, double sigma,
                Array seed, const FoliationOptions& opts) {
  Leaf leaf;
  leaf.sigma = sigma;
  // Normalize the seed to area radius exactly sigma; the solver holds the
  // area fixed, so the converged leaf has area radius sigma as well.
  seed *= sigma / std::sqrt(grid->integrate(seed.square()) / (4.0 * M_PI));
  NewtonResult nr = newton_stcmc(grid, bg, std::move(seed), opts.newton);
  leaf.omega = nr.omega;
  leaf.converged = nr.converged;
  leaf.iterations = nr.iterations;
  leaf.h2 = nr.h2_value;
  leaf.h2_residual = nr.residual_history.back();

  CrossSection cs(grid, bg, leaf.omega);
  leaf.rho = cs.area_radius();
  leaf.a = boost_vector(z_vector(*grid, leaf.omega));
  leaf.apriori = apriori_report(cs, sigma, opts.b1, opts.b2, opts.b3);
  return leaf;
}

}  // namespace

FoliationResult build_foliation(const GridPtr& grid,
                                const BackgroundModel& bg,
                                const FoliationOptions& opts) {
  FoliationResult res;
  res.complete = true;
  Array seed = Array::Constant(grid->n_nodes(), opts.sigma_min);
  double prev_sigma = 0.0;
  for (double s = opts.sigma_min; s <= opts.sigma_max + 1e-12;
       s += opts.delta_sigma) {
    if (!res.leaves.empty()) {
      // Multiplicative rescale of the previous leaf keeps the seed in
      // class and matches the target area radius to leading order.
      seed = res.leaves.back().omega * (s / prev_sigma);
    }
    Leaf leaf = solve_leaf(grid, bg, s, seed, opts);
    prev_sigma = s;
    const bool ok = leaf.converged;
    res.leaves.push_back(std::move(leaf));
    if (!ok) {
      res.complete = false;
      break;
    }
  }
  if (!res.leaves.empty()) {
    const Leaf& outer = res.leaves.back();
    auto [e, p] = bondi(bg.mass, outer.a);
    res.bondi_energy = e;
    res.bondi_momentum = p;
  }
  return res;
}

FoliationCheck check_foliation(const FoliationResult& result,
                               const BackgroundModel& bg) {
  FoliationCheck chk;
  const auto& leaves = result.leaves;
  if (leaves.size() < 3) return chk;
  chk.nested = true;
  chk.h2_decreasing = true;
  chk.min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < leaves.size(); ++i) {
    const double gap = (leaves[i + 1].omega - leaves[i].omega).minCoeff();
    chk.min_gap = std::min(chk.min_gap, gap);
    if (gap <= 0.0) chk.nested = false;
    if (leaves[i + 1].h2 >= leaves[i].h2) chk.h2_decreasing = false;
  }
  for (const Leaf& leaf : leaves) {
    const double s = leaf.sigma;
    const double model = 4.0 / (s * s) - 8.0 * bg.mass / (s * s * s);
    chk.max_profile_dev = std::max(
        chk.max_profile_dev, std::pow(s, 4) * std::abs(leaf.h2 - model));
    chk.max_sigma_a = std::max(chk.max_sigma_a, s * leaf.a.norm());
  }
  return chk;
}

UniquenessProbe uniqueness_probe(const GridPtr& grid,
                                 const BackgroundModel& bg, double sigma,
                                 const std::vector<Array>& seeds,
                                 const NewtonOptions& opts) {
  UniquenessProbe probe;
  probe.all_converged = true;
  FoliationOptions fopts;
  fopts.newton = opts;
  for (const Array& seed : seeds) {
    Leaf leaf = solve_leaf(grid, bg, sigma, seed, fopts);
    probe.all_converged = probe.all_converged && leaf.converged;
    probe.leaves.push_back(std::move(leaf));
  }
  for (size_t i = 0; i < probe.leaves.size(); ++i)
    for (size_t j = i + 1; j < probe.leaves.size(); ++j)
      probe.max_pair_distance = std::max(
          probe.max_pair_distance,
          (probe.leaves[i].omega - probe.leaves[j].omega).abs().maxCoeff());
  return probe;
}

}  // namespace nullcone
