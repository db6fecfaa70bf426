#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nullcone/boost.hpp"
#include "test_helpers.hpp"

using namespace nullcone;
using nullcone::testing::make_grid;
using nullcone::testing::random_surface;

TEST_CASE("boost matrix maps the rest vector to (gamma, a)") {
  const Vec3 a(0.2, -0.4, 0.3);
  const double gamma = std::sqrt(1.0 + a.squaredNorm());
  const Eigen::Matrix4d lam = boost_matrix(a);
  Eigen::Vector4d rest(1, 0, 0, 0);
  Eigen::Vector4d img = lam * rest;
  CHECK(img[0] == doctest::Approx(gamma).epsilon(1e-15));
  for (int i = 0; i < 3; ++i)
    CHECK(img[i + 1] == doctest::Approx(a[i]).epsilon(1e-14));
  // Lorentz: Lambda^T eta Lambda = eta.
  Eigen::Matrix4d eta = Eigen::Matrix4d::Identity();
  eta(0, 0) = -1.0;
  CHECK((lam.transpose() * eta * lam - eta).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("unboosted profile is the round sphere") {
  auto grid = make_grid(8);
  const Array b = boosted_profile(*grid, 3.0, Vec3::Zero());
  CHECK((b - 3.0).abs().maxCoeff() < 1e-15);
}

TEST_CASE("Z vector of a boosted sphere") {
  auto grid = make_grid(32);
  const Vec3 a(0, 0, 0.5);
  const Array b = boosted_profile(*grid, 1.0, a);
  const Vec4 z = z_vector(*grid, b);
  CHECK(z[0] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
  CHECK(std::abs(z[1]) < 1e-13);
  CHECK(std::abs(z[2]) < 1e-13);
  CHECK(z[3] == doctest::Approx(0.5).epsilon(1e-11));
  const Vec3 rec = boost_vector(z);
  CHECK((rec - a).norm() < 1e-10);
}

TEST_CASE("mobius map preserves the sphere and inverts with -a") {
  const Vec3 a(0.3, 0.1, -0.4);
  for (const Vec3& x :
       {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.6, -0.8, 0).normalized()}) {
    const Vec3 y = mobius_point(x, a);
    CHECK(y.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((mobius_point(y, -a) - x).norm() < 1e-13);
  }
}

TEST_CASE("boosting a round sphere gives the boosted profile") {
  auto grid = make_grid(24);
  const Vec3 a(0.1, 0.2, -0.3);
  const Vector coeffs =
      grid->analyze(Array::Constant(grid->n_nodes(), 2.0));
  const Array wa = boost_surface(*grid, coeffs, a);
  CHECK((wa - boosted_profile(*grid, 2.0, a)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("boost round trip returns the original surface") {
  auto grid = make_grid(32);
  const Vec3 a(0.25, -0.1, 0.2);
  const Array omega = random_surface(*grid, 10.0, 3, 0.4, 19);
  const Array wa = boost_surface(*grid, grid->analyze(omega), a);
  const Array back = boost_surface(*grid, grid->analyze(wa), -a);
  // The boosted surface is not band-limited; the round trip is accurate
  // to the spectral truncation of the intermediate.
  CHECK((back - omega).abs().maxCoeff() < 1e-8);
}

TEST_CASE("roundness report detects a boosted sphere") {
  auto grid = make_grid(32);
  const Vec3 a(0, 0.4, 0);
  const RoundnessReport rep =
      roundness_report(*grid, boosted_profile(*grid, 7.0, a));
  CHECK(rep.rho == doctest::Approx(7.0).epsilon(1e-12));
  CHECK((rep.a - a).norm() < 1e-10);
  CHECK(rep.sup_deviation < 1e-9);
  CHECK(rep.sup_grad_deviation < 1e-8);
}

TEST_CASE("boost_vector requires a future-timelike Z") {
  CHECK_THROWS(boost_vector(Vec4(1.0, 2.0, 0.0, 0.0)));
  CHECK_THROWS(boost_vector(Vec4(-1.0, 0.0, 0.0, 0.0)));
}
