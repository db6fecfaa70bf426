#include "nullcone/identities.hpp"

#include <cmath>
#include <stdexcept>

#include "nullcone/jacobi.hpp"

namespace nullcone {

namespace {

// Residual report from per-node residual and scale fields.
ResidualReport make_report(const std::string& name, const CrossSection& cs,
                           const Array& residual, const Array& scale) {
  ResidualReport rep;
  rep.name = name;
  rep.bandlimit = cs.grid()->bandlimit();
  rep.max_residual = residual.maxCoeff();
  rep.scale = scale.maxCoeff();
  rep.relative = rep.scale > 0.0 ? rep.max_residual / rep.scale : 0.0;
  return rep;
}

Array gamma_norm(const TensorField& t, const Array& omega) {
  return t.frame_norm() * omega.pow(-t.rank());
}

}  // namespace

ResidualReport gauss_residual(const CrossSection& cs) {
  const Array& w = cs.omega();
  Array t1 = cs.h2();
  Array t2 = 4.0 * cs.gauss_curvature();  // 2R with R = 2K
  Array t3 = 4.0 * (cs.h_omega() - 1.0) / w.square();
  Array residual = (t1 - t2 - t3).abs();
  Array scale = t1.abs().max(t2.abs()).max(t3.abs());
  return make_report("gauss", cs, residual, scale);
}

ResidualReport codazzi_residual_full(const CrossSection& cs) {
  const Array& w = cs.omega();
  TensorField da =
      conformal_covariant_derivative(cs.scalar_A(), w, cs.d_omega());
  const Array ul_theta = cs.ul_theta();

  TensorField lhs(cs.grid(), 3), rhs(cs.grid(), 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        lhs(i, j, k) = da(i, j, k) - da(j, i, k);
        rhs(i, j, k) = ul_theta * cs.rm_ijkL()(i, j, k) +
                       cs.torsion()(j) * cs.scalar_A()(i, k) -
                       cs.torsion()(i) * cs.scalar_A()(j, k);
      }
  Array residual = gamma_norm(lhs - rhs, w);
  Array scale = gamma_norm(da, w).max(gamma_norm(rhs, w));
  return make_report("codazzi_full", cs, residual, scale);
}

ResidualReport codazzi_residual_contracted(const CrossSection& cs) {
  const Array& w = cs.omega();
  const Array inv_w2 = w.square().inverse();
  TensorField da0 =
      conformal_covariant_derivative(cs.scalar_A_tracefree(), w, cs.d_omega());
  TensorField dh2 = round_gradient(cs.grid(), cs.h2());

  TensorField lhs(cs.grid(), 1), rhs(cs.grid(), 1);
  for (int j = 0; j < 2; ++j) {
    lhs(j) = (da0(0, 0, j) + da0(1, 1, j)) * inv_w2;
    Array rm_trace = (cs.rm_ijkL()(0, j, 0) + cs.rm_ijkL()(1, j, 1)) * inv_w2;
    Array a0_tau = (cs.torsion()(0) * cs.scalar_A_tracefree()(0, j) +
                    cs.torsion()(1) * cs.scalar_A_tracefree()(1, j)) *
                   inv_w2;
    rhs(j) = 0.5 * dh2(j) + 0.5 * cs.h2() * cs.torsion()(j) - a0_tau +
             cs.ul_theta() * rm_trace;
  }
  Array residual = gamma_norm(lhs - rhs, w);
  Array scale = gamma_norm(lhs, w).max(gamma_norm(dh2, w) * w.inverse());
  return make_report("codazzi_contracted", cs, residual, scale);
}

namespace {

// Second conformal covariant derivative of A: DDA(k, l, i, j)
// = D_k D_l A_ij.
TensorField second_derivative_A(const CrossSection& cs) {
  TensorField da =
      conformal_covariant_derivative(cs.scalar_A(), cs.omega(), cs.d_omega());
  return conformal_covariant_derivative(da, cs.omega(), cs.d_omega());
}

}  // namespace

ResidualReport simon_residual_full(const CrossSection& cs) {
  const GridPtr& grid = cs.grid();
  const Array& w = cs.omega();
  TensorField dda = second_derivative_A(cs);
  const TensorField& a = cs.scalar_A();
  const TensorField& tau = cs.torsion();
  TensorField da = conformal_covariant_derivative(a, w, cs.d_omega());
  TensorField dtau = conformal_covariant_derivative(tau, w, cs.d_omega());

  // Pulled-back ambient curvature W_kjl = ul_theta Rm(d_k, d_j, d_l, L) and
  // its surface derivative.
  TensorField wt = cs.rm_ijkL().scaled(cs.ul_theta());
  TensorField dw = conformal_covariant_derivative(wt, w, cs.d_omega());

  const Array k_gauss = cs.gauss_curvature();
  const Array w2 = w.square();

  TensorField lhs(grid, 4), rhs(grid, 4), curv(grid, 4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          lhs(k, l, i, j) = dda(k, l, i, j);
          // Intrinsic curvature commutator terms,
          //   Rm_{kijm} A^m_l + Rm_{kilm} A^m_j,
          // with Rm_{abcd} = K (gamma_ac gamma_bd - gamma_ad gamma_bc).
          Array c = Array::Zero(grid->n_nodes());
          if (k == j) c += a(i, l);
          if (i == j) c -= a(k, l);
          if (k == l) c += a(i, j);
          if (i == l) c -= a(k, j);
          curv(k, l, i, j) = k_gauss * w2 * c;
          rhs(k, l, i, j) =
              dda(i, j, k, l) + curv(k, l, i, j) +
              tau(j) * da(i, k, l) + tau(i) * da(k, j, l) -
              tau(k) * da(i, j, l) - tau(l) * da(k, i, j) +
              dtau(i, j) * a(k, l) + dtau(k, i) * a(l, j) -
              dtau(i, k) * a(j, l) - dtau(k, l) * a(i, j) +
              dw(i, k, j, l) + dw(k, l, i, j);
        }
  Array residual = gamma_norm(lhs - rhs, w);
  Array scale =
      gamma_norm(dda, w).max(gamma_norm(curv, w)).max(gamma_norm(dw, w));
  return make_report("simon_full", cs, residual, scale);
}

ResidualReport simon_residual_contracted(const CrossSection& cs) {
  const GridPtr& grid = cs.grid();
  const Array& w = cs.omega();
  const Array inv_w2 = w.square().inverse();
  TensorField dda = second_derivative_A(cs);

  // Hess_gamma H^2.
  TensorField dh2 = round_gradient(grid, cs.h2());
  TensorField hess_h2 = conformal_covariant_derivative(dh2, w, cs.d_omega());

  // Rough Laplacian of A.
  TensorField lap_a(grid, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      lap_a(i, j) = (dda(0, 0, i, j) + dda(1, 1, i, j)) * inv_w2;

  const Array r_scal = 2.0 * cs.gauss_curvature();
  const Array one_m_h = 1.0 - cs.h_omega();
  const Array& hp = cs.dh_omega();
  const Array& hpp = cs.ddh_omega();
  const Array ult = cs.ul_theta();

  Array c_a0 = r_scal + 2.0 * one_m_h * inv_w2 + hp / w;
  Array c_dw = ult.square() * (2.0 * one_m_h * inv_w2 + 2.0 * hp / w - hpp) -
               ult * (16.0 * one_m_h / w.cube() + 12.0 * hp * inv_w2);

  TensorField lhs(grid, 2), rhs(grid, 2);
  const Array& g2 = cs.grad_omega_sq();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Array dwdw = cs.d_omega()(i) * cs.d_omega()(j);
      if (i == j) dwdw -= 0.5 * g2;  // gamma-trace-free part
      lhs(i, j) = hess_h2(i, j);
      rhs(i, j) = lap_a(i, j) - c_a0 * cs.scalar_A_tracefree()(i, j) +
                  c_dw * dwdw;
    }
  Array residual = gamma_norm(lhs - rhs, w);
  Array scale = gamma_norm(hess_h2, w).max(gamma_norm(lap_a, w));
  return make_report("simon_contracted", cs, residual, scale);
}

ResidualReport jacobi_consistency(const CrossSection& cs, const Array& f,
                                  double eps) {
  const Array& w = cs.omega();
  if (eps <= 0.0 || eps > 1e-3 * w.minCoeff())
    throw std::invalid_argument("step outside (0, 1e-3 min omega]");
  const GridPtr& grid = cs.grid();
  const BackgroundModel& bg = cs.background();
  Array h2p, h2m;
  double mean;
  mean_curvature_fast(*grid, bg, Array(w + eps * f), h2p, mean);
  mean_curvature_fast(*grid, bg, Array(w - eps * f), h2m, mean);
  Array fd = (h2p - h2m) / (2.0 * eps);
  Array jf = jacobi_apply(cs, Array(cs.ul_theta() * f));
  Array residual = (fd - jf).abs();
  Array scale = fd.abs().max(jf.abs());
  return make_report("jacobi_consistency", cs, residual, scale);
}

APrioriReport apriori_report(const CrossSection& cs, double sigma, double b1,
                             double b2, double b3) {
  APrioriReport rep;
  rep.sigma = sigma;
  const Array& w = cs.omega();
  rep.max_omega_dev = (w - sigma).abs().maxCoeff();
  const TensorField& a0 = cs.scalar_A_tracefree();
  rep.a0_weighted =
      std::pow(sigma, 4) * (a0.frame_norm() * w.pow(-2)).maxCoeff();
  TensorField da0 = conformal_covariant_derivative(a0, w, cs.d_omega());
  rep.grad_a0_weighted =
      std::pow(sigma, 5) * (da0.frame_norm() * w.pow(-3)).maxCoeff();

  // C^3 surrogate: largest sup frame norm among the first three round
  // covariant derivatives of omega/rho (and the function itself).
  Array g = w / cs.area_radius();
  rep.c3_surrogate = g.abs().maxCoeff();
  TensorField t = TensorField::scalar(cs.grid(), g);
  for (int l = 1; l <= 3; ++l) {
    t = round_covariant_derivative(t);
    rep.c3_surrogate = std::max(rep.c3_surrogate, t.frame_norm().maxCoeff());
  }
  rep.member = rep.max_omega_dev <= b1 && rep.a0_weighted <= b2 &&
               rep.grad_a0_weighted <= b3;
  return rep;
}

double weighted_norm(const CrossSection& cs, const Array& f, NormMetric m,
                     int k, int p) {
  if (k < 0 || k > 3 || (p != 2 && p != 0))
    throw std::invalid_argument("unsupported (k, p)");
  const GridPtr& grid = cs.grid();
  const bool conformal = m == NormMetric::Conformal;
  const Array& w = cs.omega();
  const double rho = conformal ? cs.area_radius() : 1.0;

  auto lp_norm = [&](const TensorField& t) {
    Array nrm = conformal ? gamma_norm(t, w) : t.frame_norm();
    if (p == 0) return nrm.maxCoeff();
    Array sq = nrm.square();
    if (conformal) sq *= w.square();  // measure of gamma = omega^2 dmu_hat
    return std::sqrt(grid->integrate(sq));
  };

  // || f ||_{W^{k,p}} = sum_{j=0..k} rho^j || D^j f ||_{L^p} by unrolling
  // the iterative definition.
  TensorField t = TensorField::scalar(grid, f);
  double total = lp_norm(t);
  double weight = 1.0;
  for (int j = 1; j <= k; ++j) {
    t = conformal ? conformal_covariant_derivative(t, w, cs.d_omega())
                  : round_covariant_derivative(t);
    weight *= rho;
    total += weight * lp_norm(t);
  }
  return total;
}

}  // namespace nullcone
