#pragma once

#include <array>

#include "nullcone/grid.hpp"

namespace nullcone {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

// Lorentz boost matrix taking (1, 0) to (sqrt(1 + |a|^2), a); `a` is the
// boost parameter (gamma * velocity).
Eigen::Matrix4d boost_matrix(const Vec3& a);

// Round-sphere profile seen from a boosted frame:
//   b_{rho, a}(x) = rho / (sqrt(1 + |a|^2) - <a, x>).
Array boosted_profile(const SphereGrid& grid, double rho, const Vec3& a);

// Conformal (Mobius) transformation of the sphere induced by the boost -a:
//   Phi(x) = spatial part of Lambda_{-a}(1, x) / time part.
Vec3 mobius_point(const Vec3& x, const Vec3& a);

// Boost of a graph surface: omega_a(x) = omega(Phi(x)) / (sqrt(1+|a|^2)
// - <a, x>).  The input surface is given by its harmonic coefficients so
// it can be evaluated at the mapped points.
Array boost_surface(const SphereGrid& grid, const Vector& omega_coeffs,
                    const Vec3& a);

// Center-of-mass four-vector of a graph surface:
//   Z^t = (1/|Sigma|) int omega^3 dmu_hat,
//   Z^i = (1/|Sigma|) int omega^3 x^i dmu_hat,  |Sigma| = int omega^2.
Vec4 z_vector(const SphereGrid& grid, const Array& omega);

// Boost parameter extracted from Z: a = Z_spatial / sqrt((Z^t)^2 - |Z|^2).
// Requires Z timelike and future-pointing.
Vec3 boost_vector(const Vec4& z);

struct RoundnessReport {
  double rho = 0.0;          // conformal area radius
  Vec3 a{0.0, 0.0, 0.0};     // boost parameter from the Z vector
  double sup_deviation = 0.0;       // sup |omega - b_{rho,a}|
  double sup_grad_deviation = 0.0;  // sup |dhat(omega - b_{rho,a})|
};

// How far the surface is from the nearest boosted round sphere, with the
// candidate sphere chosen from the area radius and the Z vector.
RoundnessReport roundness_report(const SphereGrid& grid, const Array& omega);

}  // namespace nullcone
