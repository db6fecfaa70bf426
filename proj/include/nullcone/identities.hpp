#pragma once

#include <string>

#include "nullcone/cross_section.hpp"

namespace nullcone {

struct ResidualReport {
  std::string name;
  double max_residual = 0.0;  // sup pointwise residual norm
  double scale = 0.0;         // max magnitude of the largest term
  double relative = 0.0;      // max_residual / scale (0 when scale == 0)
  int bandlimit = 0;
};

// Scalar Gauss identity on the model class:
//   H^2 - 2R - 4(h(omega) - 1)/omega^2 = 0,  R = 2K.
ResidualReport gauss_residual(const CrossSection& cs);

// Codazzi equation for the scalar second fundamental form, full 3-tensor
//   D_i A_jk - D_j A_ik = ul_theta Rm(d_i, d_j, d_k, L)
//                         + tau_j A_ik - tau_i A_jk
// and its divergence-traced version
//   div A0_j = 1/2 dH^2_j + 1/2 H^2 tau_j - A0(tau#, d_j)
//              + ul_theta gamma^{ik} Rm(d_i, d_j, d_k, L).
ResidualReport codazzi_residual_full(const CrossSection& cs);
ResidualReport codazzi_residual_contracted(const CrossSection& cs);

// Simon-type identity for A: symmetrized second covariant derivatives
// against intrinsic curvature, torsion, and pulled-back ambient curvature
// terms (full), and the contracted Hess H^2 form (model-exact up to the
// structural remainder when q != 0).
ResidualReport simon_residual_full(const CrossSection& cs);
ResidualReport simon_residual_contracted(const CrossSection& cs);

// Central finite difference of H^2 along omega +/- eps f against the
// linearization J(ul_theta f).
ResidualReport jacobi_consistency(const CrossSection& cs, const Array& f,
                                  double eps);

struct APrioriReport {
  double sigma = 0.0;
  double max_omega_dev = 0.0;   // max |omega - sigma|
  double a0_weighted = 0.0;     // sigma^4 max |A0|_gamma
  double grad_a0_weighted = 0.0;  // sigma^5 max |D A0|_gamma
  double c3_surrogate = 0.0;    // max_{0<=l<=3} sup |Dhat^l (omega/rho)|
  bool member = false;          // the three class inequalities
};

APrioriReport apriori_report(const CrossSection& cs, double sigma, double b1,
                             double b2, double b3);

enum class NormMetric { Round, Conformal };

// Weighted Sobolev norm, defined iteratively:
//   ||f||_{W^{0,p}} = ||f||_{L^p},
//   ||f||_{W^{k+1,p}} = ||f||_{L^p} + rho ||Df||_{W^{k,p}},
// where rho is the metric's area radius (1 for the round metric) and the
// connection/measure/tensor norms belong to the chosen metric.  k <= 3,
// p in {2, inf} with p_inf selected by p = 0.
double weighted_norm(const CrossSection& cs, const Array& f, NormMetric m,
                     int k, int p);

}  // namespace nullcone
