#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nullcone/boost.hpp"
#include "nullcone/cross_section.hpp"
#include "test_helpers.hpp"

using namespace nullcone;
using nullcone::testing::make_grid;
using nullcone::testing::random_surface;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("round leaf reproduces the model profile data") {
  auto grid = make_grid(8);
  BackgroundModel bg;
  bg.mass = 1.0;
  const CrossSection cs(grid, bg, Array::Constant(grid->n_nodes(), 8.0));
  CHECK((cs.ul_theta() - 0.25).abs().maxCoeff() < 1e-14);
  // H^2 = 4h/r^2 = 4 * 0.75 / 64.
  CHECK((cs.h2() - 3.0 / 64.0).abs().maxCoeff() < 5e-13);
  CHECK(cs.h2_mean() == doctest::Approx(3.0 / 64.0).epsilon(1e-13));
  CHECK(cs.area() == doctest::Approx(4.0 * kPi * 64.0).epsilon(1e-14));
  CHECK(cs.area_radius() == doctest::Approx(8.0).epsilon(1e-14));
  // Intrinsic Gauss curvature of the round leaf is 1/r^2.
  CHECK((cs.gauss_curvature() - 1.0 / 64.0).abs().maxCoeff() < 5e-13);
  // The trace-free part of A and the torsion vanish.
  CHECK(cs.scalar_A_tracefree().frame_norm().maxCoeff() < 1e-11);
  CHECK(cs.torsion().frame_norm().maxCoeff() < 1e-14);
}

TEST_CASE("trace of A reproduces the closed-form mean curvature") {
  auto grid = make_grid(20);
  BackgroundModel bg;
  bg.mass = 1.0;
  const Array omega = random_surface(*grid, 18.0, 6, 0.4, 11);
  const CrossSection cs(grid, bg, omega);

  Array h2_fast;
  double mean_fast;
  mean_curvature_fast(*grid, bg, omega, h2_fast, mean_fast);
  CHECK((cs.h2() - h2_fast).abs().maxCoeff() < 1e-11);
  CHECK(cs.h2_mean() == doctest::Approx(mean_fast).epsilon(1e-12));
}

TEST_CASE("boosted Minkowski spheres are round: H^2 = 4/rho^2, K = 1/rho^2") {
  auto grid = make_grid(32);
  const BackgroundModel bg;  // mass 0
  const double rho = 5.0;
  for (const Vec3& a :
       {Vec3(0, 0, 0), Vec3(0, 0, 0.5), Vec3(0.3, -0.2, 0.1)}) {
    const CrossSection cs(grid, bg, boosted_profile(*grid, rho, a));
    const double h2_expect = 4.0 / (rho * rho);
    CHECK((cs.h2() - h2_expect).abs().maxCoeff() / h2_expect < 1e-9);
    const double k_expect = 1.0 / (rho * rho);
    CHECK((cs.gauss_curvature() - k_expect).abs().maxCoeff() / k_expect <
          1e-9);
    // Boosted round spheres have vanishing shear.
    CHECK(cs.scalar_A_tracefree().frame_norm().maxCoeff() * rho * rho <
          1e-8);
  }
}

TEST_CASE("scaling covariance in Minkowski") {
  auto grid = make_grid(16);
  const BackgroundModel bg;
  const Array omega = random_surface(*grid, 10.0, 4, 0.3, 5);
  const CrossSection cs1(grid, bg, omega);
  const CrossSection cs2(grid, bg, Array(2.0 * omega));
  CHECK((cs2.h2() - 0.25 * cs1.h2()).abs().maxCoeff() < 1e-13);
  CHECK((cs2.gauss_curvature() - 0.25 * cs1.gauss_curvature())
            .abs()
            .maxCoeff() < 1e-13);
  CHECK(cs2.area_radius() ==
        doctest::Approx(2.0 * cs1.area_radius()).epsilon(1e-13));
}

TEST_CASE("ambient contractions on a round Schwarzschild leaf") {
  auto grid = make_grid(8);
  BackgroundModel bg;
  bg.mass = 1.0;
  const double r = 10.0;
  const CrossSection cs(grid, bg, Array::Constant(grid->n_nodes(), r));
  // Ric(ul, ul) = 0 identically for the model family.
  CHECK(cs.ric_ul_ul().abs().maxCoeff() < 1e-14);
  // On the round leaf the adapted null frame reduces to (ul_L, L_r), so
  // Rm(ul, L, ul, L) is the radial component 2h''.
  CHECK((cs.rm_ul_L_ul_L() - 2.0 * bg.ddh(r)).abs().maxCoeff() < 1e-14);
  // Schwarzschild is Ricci flat: Rbar = 0 and Ric(ul, L) = 0.
  CHECK(cs.ambient_scalar().abs().maxCoeff() < 1e-13);
  CHECK(cs.ric_ul_L().abs().maxCoeff() < 1e-13);
}

TEST_CASE("positivity violation is rejected") {
  auto grid = make_grid(4);
  BackgroundModel bg;
  Array omega = Array::Constant(grid->n_nodes(), 1.0);
  omega[0] = -0.5;
  CHECK_THROWS(CrossSection(grid, bg, omega));
}
