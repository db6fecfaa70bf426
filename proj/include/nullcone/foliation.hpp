#pragma once

#include <vector>

#include "nullcone/boost.hpp"
#include "nullcone/identities.hpp"
#include "nullcone/jacobi.hpp"

namespace nullcone {

struct Leaf {
  double sigma = 0.0;     // target area radius
  Array omega;
  double rho = 0.0;       // achieved area radius
  double h2 = 0.0;        // constant spacetime mean curvature squared
  double h2_residual = 0.0;  // sup |H^2 - mean| at convergence
  Vec3 a{0.0, 0.0, 0.0};  // boost vector from the Z vector
  APrioriReport apriori;
  int iterations = 0;
  bool converged = false;
};

struct FoliationOptions {
  double sigma_min = 15.0;
  double sigma_max = 30.0;
  double delta_sigma = 1.0;
  NewtonOptions newton;
  // A-priori class constants used for the per-leaf reports.
  double b1 = 2.0, b2 = 10.0, b3 = 10.0;
};

struct FoliationResult {
  std::vector<Leaf> leaves;      // ascending sigma
  bool complete = false;         // all leaves converged
  double bondi_energy = 0.0;     // from (m, a of outermost leaf)
  Vec3 bondi_momentum{0.0, 0.0, 0.0};
};

struct FoliationCheck {
  bool nested = false;               // all pairwise gap margins > 0
  bool h2_decreasing = false;        // strictly along sigma
  double min_gap = 0.0;              // min over adjacent pairs and nodes
  double max_profile_dev = 0.0;      // max sigma^4 |h2 - 4/s^2 + 8m/s^3|
  double max_sigma_a = 0.0;          // max sigma |a|
};

// Sigma-continuation sweep: the first leaf is seeded with the coordinate
// sphere omega = sigma_min, later leaves with the previous leaf rescaled
// by sigma/(sigma - delta).  A failed leaf stops the sweep; partial
// results are returned with complete = false.
FoliationResult build_foliation(const GridPtr& grid,
                                const BackgroundModel& bg,
                                const FoliationOptions& opts);

FoliationCheck check_foliation(const FoliationResult& result,
                               const BackgroundModel& bg);

// Bondi energy/momentum of a family converging to a boosted sphere.
inline std::pair<double, Vec3> bondi(double mass, const Vec3& a_limit) {
  return {mass * std::sqrt(1.0 + a_limit.squaredNorm()), mass * a_limit};
}

struct UniquenessProbe {
  std::vector<Leaf> leaves;   // converged leaf per seed
  double max_pair_distance = 0.0;  // sup-norm distance between leaves
  bool all_converged = false;
};

// Solve from several in-class seeds at the same sigma and measure the
// pairwise sup distances of the converged surfaces.
UniquenessProbe uniqueness_probe(const GridPtr& grid,
                                 const BackgroundModel& bg, double sigma,
                                 const std::vector<Array>& seeds,
                                 const NewtonOptions& opts = {});

}  // namespace nullcone
