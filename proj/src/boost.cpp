#include "nullcone/boost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nullcone {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::Matrix4d boost_matrix(const Vec3& a) {
  const double gamma = std::sqrt(1.0 + a.squaredNorm());
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = gamma;
  for (int i = 0; i < 3; ++i) {
    m(0, i + 1) = a[i];
    m(i + 1, 0) = a[i];
  }
  if (a.squaredNorm() > 0.0) {
    const Vec3 ahat = a.normalized();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i + 1, j + 1) += (gamma - 1.0) * ahat[i] * ahat[j];
  }
  return m;
}

Array boosted_profile(const SphereGrid& grid, double rho, const Vec3& a) {
  const double gamma = std::sqrt(1.0 + a.squaredNorm());
  Array ax = a[0] * grid.cartesian(0) + a[1] * grid.cartesian(1) +
             a[2] * grid.cartesian(2);
  return rho / (gamma - ax);
}

Vec3 mobius_point(const Vec3& x, const Vec3& a) {
  const double gamma = std::sqrt(1.0 + a.squaredNorm());
  const double denom = gamma - a.dot(x);
  Vec3 num = x - a;
  if (a.squaredNorm() > 0.0) {
    const Vec3 ahat = a.normalized();
    num += (gamma - 1.0) * ahat.dot(x) * ahat;
  }
  return num / denom;
}

Array boost_surface(const SphereGrid& grid, const Vector& omega_coeffs,
                    const Vec3& a) {
  const double gamma = std::sqrt(1.0 + a.squaredNorm());
  Array out(grid.n_nodes());
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const int p = grid.node_index(i, j);
      Vec3 x(grid.cartesian(0)[p], grid.cartesian(1)[p],
             grid.cartesian(2)[p]);
      Vec3 y = mobius_point(x, a);
      y.normalize();  // guard against rounding drift off the sphere
      const double theta = std::acos(std::clamp(y[2], -1.0, 1.0));
      const double phi = std::atan2(y[1], y[0]);
      out[p] = grid.evaluate(omega_coeffs, theta, phi) / (gamma - a.dot(x));
    }
  }
  return out;
}

Vec4 z_vector(const SphereGrid& grid, const Array& omega) {
  const double area = grid.integrate(omega.square());
  const Array w3 = omega.cube();
  Vec4 z;
  z[0] = grid.integrate(w3) / area;
  for (int i = 0; i < 3; ++i)
    z[i + 1] = grid.integrate(w3 * grid.cartesian(i)) / area;
  return z;
}

Vec3 boost_vector(const Vec4& z) {
  const double norm_sq =
      z[0] * z[0] - z[1] * z[1] - z[2] * z[2] - z[3] * z[3];
  if (z[0] <= 0.0 || norm_sq <= 0.0)
    throw std::domain_error("Z vector must be future-pointing timelike");
  return Vec3(z[1], z[2], z[3]) / std::sqrt(norm_sq);
}

RoundnessReport roundness_report(const SphereGrid& grid, const Array& omega) {
  RoundnessReport rep;
  rep.rho = std::sqrt(grid.integrate(omega.square()) / (4.0 * kPi));
  rep.a = boost_vector(z_vector(grid, omega));
  Array model = boosted_profile(grid, rep.rho, rep.a);
  Array diff = omega - model;
  rep.sup_deviation = diff.abs().maxCoeff();
  Vector c = grid.analyze(diff);
  Array dt, dp;
  grid.synthesize_gradient(c, dt, dp);
  rep.sup_grad_deviation = (dt.square() + dp.square()).sqrt().maxCoeff();
  return rep;
}

}  // namespace nullcone
