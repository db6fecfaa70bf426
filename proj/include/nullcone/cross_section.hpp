#pragma once

#include "nullcone/background.hpp"
#include "nullcone/grid.hpp"
#include "nullcone/tensor.hpp"

namespace nullcone {

// Spacelike cross-section of the background null cone, written as the graph
// r = omega(x) over the unit sphere.  The induced metric is exactly
// conformal, gamma = omega^2 ghat, and all geometric fields are assembled
// from spectral derivatives of omega plus the background curvature table.
//
// Tensor fields are stored in ghat-orthonormal frame components; norms and
// traces with respect to gamma carry explicit powers of omega.
class CrossSection {
 public:
  CrossSection(GridPtr grid, BackgroundModel bg, Array omega);

  const GridPtr& grid() const { return grid_; }
  const BackgroundModel& background() const { return bg_; }
  const Array& omega() const { return omega_; }
  const Vector& omega_coeffs() const { return omega_coeffs_; }

  // First/second round derivatives of omega (frame components).
  const TensorField& d_omega() const { return d_omega_; }
  const Array& grad_omega_sq() const { return grad_sq_; }  // |dhat omega|^2
  const Array& lap_omega() const { return lap_omega_; }

  // Null expansions and second fundamental form data.
  const Array& ul_theta() const { return ul_theta_; }  // 2/omega
  // Spacetime mean curvature squared, tr_gamma A (assembled as the trace
  // of the scalar second fundamental form).
  const Array& h2() const { return h2_; }
  double h2_mean() const { return h2_mean_; }  // area-weighted mean
  // Scalar second fundamental form A and its gamma-trace-free part.
  const TensorField& scalar_A() const { return A_; }
  const TensorField& scalar_A_tracefree() const { return A0_; }
  // Torsion one-form, assembled from the general formula (vanishes
  // identically for graphs inside the model class).
  const TensorField& torsion() const { return torsion_; }

  // Gauss curvature of the induced metric.
  const Array& gauss_curvature() const { return gauss_; }

  double area() const { return area_; }
  double area_radius() const { return rho_; }

  // Ambient curvature contractions along the section (per-node fields).
  const Array& ric_ul_L() const { return ric_ul_L_; }          // Ric(ul_L, L)
  const Array& rm_ul_L_ul_L() const { return rm_ulLulL_; }     // Rm(ul_L,L,ul_L,L)
  const Array& ric_ul_ul() const { return ric_ulul_; }         // Ric(ul_L, ul_L)
  const Array& ambient_scalar() const { return scal_; }        // R-bar
  // Pulled-back curvature 3-tensor Rm(d_i, d_j, d_k, L) in frame comps.
  const TensorField& rm_ijkL() const { return rm_ijkL_; }

  // Background function values along the section.
  const Array& h_omega() const { return h_; }
  const Array& dh_omega() const { return dh_; }
  const Array& ddh_omega() const { return ddh_; }

  // Adapted ambient basis at one node (used by identity checks that need
  // additional contractions).
  AmbientVector tangent_basis(int node, int a) const;
  AmbientVector null_ul() const;
  AmbientVector null_L(int node) const;

 private:
  GridPtr grid_;
  BackgroundModel bg_;
  Array omega_;
  Vector omega_coeffs_;
  TensorField d_omega_;
  Array grad_sq_, lap_omega_;
  Array h_, dh_, ddh_;
  Array ul_theta_, h2_;
  double h2_mean_ = 0.0, area_ = 0.0, rho_ = 0.0;
  TensorField A_, A0_, torsion_;
  Array gauss_;
  Array ric_ul_L_, rm_ulLulL_, ric_ulul_, scal_;
  TensorField rm_ijkL_;
};

// Fast path used by the flow loop: spacetime mean curvature squared and
// its area-weighted mean from omega alone (same values as the assembled
// trace, via the conformal closed form).
void mean_curvature_fast(const SphereGrid& grid, const BackgroundModel& bg,
                         const Array& omega, Array& h2, double& h2_mean);

}  // namespace nullcone
