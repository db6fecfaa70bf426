#pragma once

#include <array>
#include <string>
#include <vector>

namespace nullcone {

// Spherically symmetric null-cone background with metric function
// h(r) = 1 - 2m/r + q(r), in the geodesic gauge where the null generator
// is affinely parametrized (kappa = 0).  q = 0 gives Schwarzschild, m = 0
// and q = 0 gives Minkowski.
struct BackgroundModel {
  double mass = 0.0;
  // Optional correction q(r).  "none" or "inverse_square" (q = coeff/r^2).
  std::string q_kind = "none";
  double q_coeff = 0.0;
  double r_min = 0.0;  // lower end of the validity range (diagnostic only)

  double h(double r) const;
  double dh(double r) const;    // h'
  double ddh(double r) const;   // h''

  // Round-sphere leaf data at radius r: null expansions and second
  // fundamental forms of the coordinate sphere S_r inside the cone.
  double ul_theta_r(double r) const { return 2.0 / r; }           // 2/r
  double theta_r(double r) const { return 2.0 * h(r) / r; }       // 2h/r
  double h2_r(double r) const { return 4.0 * h(r) / (r * r); }    // tr A
  // chi = r ghat, ul_chi = r ghat (coefficients of ghat), torsion = 0.
  double chi_coeff(double r) const { return r * h(r); }
  double ul_chi_coeff(double r) const { return r; }
};

// Argument of the ambient curvature engine: a tangent part expressed in the
// ghat-orthonormal frame plus coefficients of the null directions ul_L
// (incoming, affine) and L_r (outgoing, with g(ul_L, L_r) = 2).
struct AmbientVector {
  std::array<double, 2> tangent{0.0, 0.0};
  double c_ul = 0.0;  // ul_L coefficient
  double c_lr = 0.0;  // L_r coefficient
};

// Ambient Riemann tensor of the background evaluated at radius r on four
// ambient vectors, using the closed-form component table of the model
// class (all components not generated by the three listed families and
// their symmetries vanish).  Sign convention:
//   Rm(X, Y, W, Z) = g(D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z, W).
double ambient_riemann(const BackgroundModel& bg, double r,
                       const AmbientVector& v1, const AmbientVector& v2,
                       const AmbientVector& v3, const AmbientVector& v4);

// Ambient covariant derivative of the Riemann tensor, direction first.
// Only tangent directions and ul_L appear in the model-class table; any
// L_r part of the direction is rejected as unsupported.
double ambient_riemann_derivative(const BackgroundModel& bg, double r,
                                  const AmbientVector& dir,
                                  const AmbientVector& v1,
                                  const AmbientVector& v2,
                                  const AmbientVector& v3,
                                  const AmbientVector& v4);

// Slot tags for the component-table convenience wrapper.
enum class Slot { Sphere1, Sphere2, UlL, Lr };

// Scalar coefficient of the curvature component with the given slot
// signature (sphere slots are filled with orthonormal frame vectors;
// Sphere1/Sphere2 pick the first/second frame leg so that genuinely
// four-sphere-slot patterns can be requested).  Returns 0 for patterns
// outside the table.
double curvature_component(const BackgroundModel& bg, double r,
                           const std::array<Slot, 4>& pattern);
double curvature_derivative_component(const BackgroundModel& bg, double r,
                                      Slot direction,
                                      const std::array<Slot, 4>& pattern);

// Least-squares fit of the decay order p in |v| ~ C r^{-p}: returns p from
// the slope of log |v| against log r.
double decay_order_estimate(const std::vector<double>& radii,
                            const std::vector<double>& values);

}  // namespace nullcone
