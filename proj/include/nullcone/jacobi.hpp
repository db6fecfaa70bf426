#pragma once

#include <functional>
#include <vector>

#include "nullcone/cross_section.hpp"

namespace nullcone {

// Jacobi operator of the cross-section (linearization of H^2 along the
// cone, d/ds H^2 = J(ul_theta f)):
//   J(f) = -2 Lap_gamma f - 4 tau(grad f) - H^2 f
//          - f (Ric(ul_L, L) - 1/2 Rm(ul_L, L, L, ul_L))
//          - f (H^2/ul_theta^2)(|ul_chi_tf|^2 + Ric(ul_L, ul_L))
//          - f ((1/ul_theta)<ul_chi_tf, A0> + 2 div tau + 2 |tau|^2),
// assembled term by term from the cross-section fields (the trace-free
// part of ul_chi vanishes identically on the model class).
Array jacobi_apply(const CrossSection& cs, const Array& f);

// Model-class closed form -2 Lap_gamma f - H^2 f + (2 h'(omega)/omega) f,
// kept as an independent oracle for jacobi_apply.
Array jacobi_apply_model(const CrossSection& cs, const Array& f);

struct SolveOptions {
  double tol = 1e-11;   // relative band-limited (Galerkin) residual
  int max_iter = 0;     // 0: choose from bandlimit
};

struct SolveResult {
  Array solution;
  double relative_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Solve J(u) = g in the band-limited Galerkin sense with a preconditioned
// minimum-residual iteration in harmonic coefficient space.  The system is
// symmetrized with the area-measure weight (J is self-adjoint in
// L2(gamma)) and preconditioned by the round-Laplacian spectral
// multiplier.  For a band-limited g in the range of J the nodal residual
// also vanishes; a general nodal g retains unresolved (aliased) content
// that no band-limited solution can match pointwise.  A dense
// spectral-space factorization of the same system is available as a
// debug path for small bandlimits.
SolveResult jacobi_solve(const CrossSection& cs, const Array& rhs,
                         const SolveOptions& opts = {});
SolveResult jacobi_solve_dense(const CrossSection& cs, const Array& rhs);

// Smallest Rayleigh quotient int f J(f) dmu / int f^2 dmu over mean-zero f
// (mean with respect to dmu_gamma), by shifted inverse-power iteration.
double min_eig_meanzero(const CrossSection& cs, double tol = 1e-10);

struct NewtonOptions {
  double tol = 1e-12;      // sup |H^2 - mean| stopping threshold
  int max_iter = 30;
  int max_halvings = 8;    // damping: step halved until residual decreases
  SolveOptions solve;
};

struct NewtonResult {
  Array omega;
  bool converged = false;
  int iterations = 0;
  double h2_value = 0.0;               // constant value at convergence
  std::vector<double> residual_history;  // sup |H^2 - mean| per iterate
};

// Constrained Newton iteration for a surface of constant spacetime mean
// curvature at fixed area: each step solves J(ul_theta f) = c - H^2 with
// the constant c fixed by the area-preservation constraint
// int ul_theta f dmu = 0, then updates omega <- omega + f.
NewtonResult newton_stcmc(const GridPtr& grid, const BackgroundModel& bg,
                          Array omega0, const NewtonOptions& opts = {});

}  // namespace nullcone
