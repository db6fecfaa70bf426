#include "nullcone/cross_section.hpp"

#include <cmath>
#include <stdexcept>

namespace nullcone {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CrossSection::CrossSection(GridPtr grid, BackgroundModel bg, Array omega)
    : grid_(std::move(grid)), bg_(std::move(bg)), omega_(std::move(omega)) {
  const int n = grid_->n_nodes();
  if (omega_.size() != n) throw std::invalid_argument("omega size mismatch");
  if ((omega_ <= 0.0).any())
    throw std::invalid_argument("omega must be positive");

  omega_coeffs_ = grid_->analyze(omega_);
  d_omega_ = TensorField(grid_, 1);
  grid_->synthesize_gradient(omega_coeffs_, d_omega_(0), d_omega_(1));
  grad_sq_ = d_omega_(0).square() + d_omega_(1).square();
  lap_omega_ = grid_->synthesize_laplacian(omega_coeffs_);
  TensorField hess = round_hessian(grid_, omega_);

  h_.resize(n);
  dh_.resize(n);
  ddh_.resize(n);
  for (int p = 0; p < n; ++p) {
    h_[p] = bg_.h(omega_[p]);
    dh_[p] = bg_.dh(omega_[p]);
    ddh_[p] = bg_.ddh(omega_[p]);
  }
  ul_theta_ = 2.0 / omega_;

  // Scalar second fundamental form:
  //   A = A_r(omega) - 2 ul_theta Hess_gamma omega
  //       + |d omega|^2_gamma ul_theta ul_chi,
  // with A_r = 2 h ghat, ul_chi = omega ghat, and the conformal Hessian
  //   Hess_gamma omega = Hess_round omega
  //       - (1/omega)(2 domega x domega - |dhat omega|^2 ghat).
  A_ = TensorField(grid_, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Array hg = hess(a, b) - (2.0 / omega_) * d_omega_(a) * d_omega_(b);
      if (a == b) hg += grad_sq_ / omega_;
      Array val = -(4.0 / omega_) * hg;
      if (a == b) val += 2.0 * h_ + 2.0 * grad_sq_ / omega_.square();
      A_(a, b) = val;
    }

  // tr_gamma A and its trace-free part.
  h2_ = (A_(0, 0) + A_(1, 1)) / omega_.square();
  A0_ = A_;
  A0_(0, 0) -= 0.5 * h2_ * omega_.square();
  A0_(1, 1) -= 0.5 * h2_ * omega_.square();

  area_ = grid_->integrate(omega_.square());
  rho_ = std::sqrt(area_ / (4.0 * kPi));
  h2_mean_ = grid_->integrate(h2_ * omega_.square()) / area_;

  // Gauss curvature of gamma = omega^2 ghat.
  Array log_omega = omega_.log();
  Array lap_log = grid_->synthesize_laplacian(grid_->analyze(log_omega));
  gauss_ = (1.0 - lap_log) / omega_.square();

  // Ambient contractions through the adapted basis and the curvature
  // table engine.
  ric_ul_L_.resize(n);
  rm_ulLulL_.resize(n);
  ric_ulul_.resize(n);
  scal_.resize(n);
  rm_ijkL_ = TensorField(grid_, 3);
  const AmbientVector ul = null_ul();
  for (int p = 0; p < n; ++p) {
    const double r = omega_[p];
    const AmbientVector L = null_L(p);
    AmbientVector tb[2] = {tangent_basis(p, 0), tangent_basis(p, 1)};
    auto ric = [&](const AmbientVector& x, const AmbientVector& y) {
      double v = 0.0;
      for (int a = 0; a < 2; ++a)
        v += ambient_riemann(bg_, r, x, tb[a], y, tb[a]) / (r * r);
      v += 0.5 * (ambient_riemann(bg_, r, x, ul, y, L) +
                  ambient_riemann(bg_, r, x, L, y, ul));
      return v;
    };
    ric_ul_L_[p] = ric(ul, L);
    rm_ulLulL_[p] = ambient_riemann(bg_, r, ul, L, ul, L);
    ric_ulul_[p] = ric(ul, ul);
    double s = ric(ul, L);
    for (int a = 0; a < 2; ++a) s += ric(tb[a], tb[a]) / (r * r);
    scal_[p] = s;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          rm_ijkL_(a, b, c)[p] =
              ambient_riemann(bg_, r, tb[a], tb[b], tb[c], L);
  }

  // Torsion, assembled from the general graph formula
  //   tau = tau_r - ul_chi_tf(grad omega, .)
  //         - (1/ul_theta)(|ul_chi_tf|^2 + Ric(ul_L, ul_L)) d omega.
  // tau_r and the trace-free part of ul_chi vanish identically on the
  // model class, so only the Ric(ul_L, ul_L) term can contribute.
  torsion_ = TensorField(grid_, 1);
  for (int a = 0; a < 2; ++a)
    torsion_(a) = -(omega_ / 2.0) * ric_ulul_ * d_omega_(a);
}

AmbientVector CrossSection::tangent_basis(int node, int a) const {
  AmbientVector v;
  v.tangent[a] = 1.0;
  v.c_ul = d_omega_(a)[node];
  return v;
}

AmbientVector CrossSection::null_ul() const {
  AmbientVector v;
  v.c_ul = 1.0;
  return v;
}

AmbientVector CrossSection::null_L(int node) const {
  const double w2 = omega_[node] * omega_[node];
  AmbientVector v;
  v.tangent[0] = -2.0 * d_omega_(0)[node] / w2;
  v.tangent[1] = -2.0 * d_omega_(1)[node] / w2;
  v.c_ul = -grad_sq_[node] / w2;
  v.c_lr = 1.0;
  return v;
}

void mean_curvature_fast(const SphereGrid& grid, const BackgroundModel& bg,
                         const Array& omega, Array& h2, double& h2_mean) {
  Vector c = grid.analyze(omega);
  Array lap = grid.synthesize_laplacian(c);
  Array dt, dp;
  grid.synthesize_gradient(c, dt, dp);
  const int n = grid.n_nodes();
  h2.resize(n);
  for (int p = 0; p < n; ++p) {
    const double w = omega[p];
    h2[p] = 4.0 * bg.h(w) / (w * w) - 4.0 * lap[p] / (w * w * w) +
            4.0 * (dt[p] * dt[p] + dp[p] * dp[p]) / (w * w * w * w);
  }
  const double area = grid.integrate(omega.square());
  h2_mean = grid.integrate(h2 * omega.square()) / area;
}

}  // namespace nullcone
