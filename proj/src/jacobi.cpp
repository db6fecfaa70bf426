#include "nullcone/jacobi.hpp"

#include <cmath>
#include <stdexcept>

#include "nullcone/tensor.hpp"

namespace nullcone {

Array jacobi_apply(const CrossSection& cs, const Array& f) {
  const GridPtr& grid = cs.grid();
  const Array& w = cs.omega();
  const Array inv_w2 = w.square().inverse();

  Vector c = grid->analyze(f);
  Array lap = grid->synthesize_laplacian(c) * inv_w2;  // Lap_gamma f
  Array df_t, df_p;
  grid->synthesize_gradient(c, df_t, df_p);
  Array tau_grad =
      (cs.torsion()(0) * df_t + cs.torsion()(1) * df_p) * inv_w2;

  // Trace-free part of ul_chi vanishes on the model class; the zero-order
  // coefficients below keep the curvature contractions that survive.
  Array potential = cs.ric_ul_L() + 0.5 * cs.rm_ul_L_ul_L();
  Array pot_ulul = cs.h2() / cs.ul_theta().square() * cs.ric_ul_ul();

  TensorField dtau =
      conformal_covariant_derivative(cs.torsion(), w, cs.d_omega());
  Array div_tau = (dtau(0, 0) + dtau(1, 1)) * inv_w2;
  Array tau_sq =
      (cs.torsion()(0).square() + cs.torsion()(1).square()) * inv_w2;

  return -2.0 * lap - 4.0 * tau_grad - cs.h2() * f - f * potential -
         f * pot_ulul - f * (2.0 * div_tau + 2.0 * tau_sq);
}

Array jacobi_apply_model(const CrossSection& cs, const Array& f) {
  const GridPtr& grid = cs.grid();
  const Array& w = cs.omega();
  Array lap = grid->synthesize_laplacian(grid->analyze(f));
  return -2.0 * lap / w.square() - cs.h2() * f + 2.0 * cs.dh_omega() / w * f;
}

namespace {

// Inner helpers for the spectral-space symmetrized system
//   Atilde x := analyze(omega^2 * J(synth(x))),  b := analyze(omega^2 g).
// Atilde is symmetric because J is self-adjoint in L2(gamma).
struct SpectralSystem {
  const CrossSection& cs;
  const GridPtr& grid;
  Array w2;
  Vector precond;  // diagonal, round-Laplacian based

  explicit SpectralSystem(const CrossSection& c)
      : cs(c), grid(c.grid()), w2(c.omega().square()) {
    const int nc = grid->n_coeffs();
    precond.resize(nc);
    for (int l = 0; l <= grid->bandlimit(); ++l)
      for (int m = -l; m <= l; ++m)
        precond[sh_index(l, m)] = 2.0 * l * (l + 1) + 4.0;
  }

  Vector apply(const Vector& x) const {
    Array f = grid->synthesize(x);
    return grid->analyze(Array(w2 * jacobi_apply(cs, f)));
  }
  Vector prec(const Vector& r) const {
    return r.cwiseQuotient(precond);
  }
};

// Preconditioned MINRES (Paige-Saunders) for the symmetric indefinite
// spectral system.
template <typename System>
Vector pminres(const System& sys, const Vector& b, double tol,
               int max_iter, double& rel_residual, int& iters) {
  const int n = b.size();
  Vector x = Vector::Zero(n);
  Vector r1 = b;
  Vector y = sys.prec(r1);
  double beta1 = std::sqrt(r1.dot(y));
  rel_residual = 0.0;
  iters = 0;
  if (beta1 == 0.0) return x;

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs_ = -1.0, sn = 0.0;
  Vector r2 = r1, w = Vector::Zero(n), w2v = Vector::Zero(n);

  for (int itn = 1; itn <= max_iter; ++itn) {
    iters = itn;
    Vector v = y / beta;
    y = sys.apply(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = sys.prec(r2);
    oldb = beta;
    beta = std::sqrt(r2.dot(y));

    const double oldeps = epsln;
    const double delta = cs_ * dbar + sn * alfa;
    const double gbar = sn * dbar - cs_ * alfa;
    epsln = sn * beta;
    dbar = -cs_ * beta;
    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, 1e-300);
    cs_ = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs_ * phibar;
    phibar = sn * phibar;

    Vector w1 = w2v;
    w2v = w;
    w = (v - oldeps * w1 - delta * w2v) / gamma;
    x += phi * w;

    if (phibar <= tol * beta1) break;
  }
  rel_residual = phibar / beta1;
  return x;
}

}  // namespace

SolveResult jacobi_solve(const CrossSection& cs, const Array& rhs,
                         const SolveOptions& opts) {
  const GridPtr& grid = cs.grid();
  SpectralSystem sys(cs);
  const Array w2 = cs.omega().square();
  const int max_iter =
      opts.max_iter > 0 ? opts.max_iter : 40 * (grid->bandlimit() + 4);

  // The system is solved in the Galerkin sense: the band-limited
  // projection of omega^2 (J f - rhs) vanishes.  For a general nodal
  // right-hand side the pointwise residual retains unresolved content,
  // so convergence is measured on the projected residual.
  const Vector b0 = grid->analyze(Array(w2 * rhs));
  const double den = b0.norm();
  auto galerkin_residual = [&](const Array& f) {
    return Vector(b0 - grid->analyze(Array(w2 * jacobi_apply(cs, f))));
  };
  auto rel_of = [&](const Vector& r) { return den > 0.0 ? r.norm() / den : r.norm(); };

  SolveResult res;
  res.solution = Array::Zero(grid->n_nodes());
  Vector residual = b0;
  res.relative_residual = rel_of(residual);
  // One round of iterative refinement on the exact projected residual
  // mops up any accuracy lost to the Lanczos recursion.
  for (int outer = 0; outer < 8; ++outer) {
    if (res.relative_residual <= opts.tol || res.iterations >= max_iter) break;
    double rel = 0.0;
    int iters = 0;
    Vector dx =
        pminres(sys, residual, 0.01 * opts.tol, max_iter - res.iterations,
                rel, iters);
    res.iterations += iters;
    const Array candidate = res.solution + grid->synthesize(dx);
    const Vector cand_residual = galerkin_residual(candidate);
    const double cand_rel = rel_of(cand_residual);
    if (cand_rel >= res.relative_residual) break;  // refinement stalled
    res.solution = candidate;
    residual = cand_residual;
    res.relative_residual = cand_rel;
  }
  res.converged = res.relative_residual <= opts.tol;
  return res;
}

SolveResult jacobi_solve_dense(const CrossSection& cs, const Array& rhs) {
  const GridPtr& grid = cs.grid();
  const int nc = grid->n_coeffs();
  if (nc > 2000)
    throw std::invalid_argument("dense debug solve limited to small grids");
  // Assemble the same weighted Galerkin system the iterative path solves.
  const Array w2 = cs.omega().square();
  Matrix a(nc, nc);
  for (int j = 0; j < nc; ++j) {
    Vector e = Vector::Zero(nc);
    e[j] = 1.0;
    a.col(j) = grid->analyze(Array(w2 * jacobi_apply(cs, grid->synthesize(e))));
  }
  Vector b = grid->analyze(Array(w2 * rhs));
  Vector x = a.partialPivLu().solve(b);
  SolveResult res;
  res.solution = grid->synthesize(x);
  Array jf = jacobi_apply(cs, res.solution);
  const Vector r = b - grid->analyze(Array(w2 * jf));
  const double den = b.norm();
  res.relative_residual = den > 0.0 ? r.norm() / den : r.norm();
  res.converged = true;
  res.iterations = 1;
  return res;
}

namespace {

// Spectral system for the shifted operator J - mu (same symmetrization and
// preconditioner as the unshifted system).
struct ShiftedSystem : SpectralSystem {
  double mu;
  ShiftedSystem(const CrossSection& c, double m)
      : SpectralSystem(c), mu(m) {}
  Vector apply(const Vector& x) const {
    Array f = grid->synthesize(x);
    Array jf = jacobi_apply(cs, f) - mu * f;
    return grid->analyze(Array(w2 * jf));
  }
};

// Solve (J - mu) u = g with preconditioned MINRES in spectral space.
Array shifted_solve(const CrossSection& cs, const Array& g, double mu,
                    double tol) {
  const GridPtr& grid = cs.grid();
  ShiftedSystem sys(cs, mu);
  Vector b = grid->analyze(Array(sys.w2 * g));
  double rel = 0.0;
  int iters = 0;
  Vector x = pminres(sys, b, tol, 40 * (grid->bandlimit() + 4), rel, iters);
  return grid->synthesize(x);
}

}  // namespace

double min_eig_meanzero(const CrossSection& cs, double tol) {
  const GridPtr& grid = cs.grid();
  const Array w2 = cs.omega().square();
  const double area = grid->integrate(w2);

  auto project = [&](const Array& f) -> Array {
    return f - grid->integrate(f * w2) / area;
  };
  auto dot_gamma = [&](const Array& f, const Array& g) {
    return grid->integrate(f * g * w2);
  };

  // Shifted inverse power iteration on the gamma-mean-zero subspace:
  // (J - mu)^{-1} with mu safely below the expected spectrum so that the
  // shifted operator is positive there.
  const double rho = cs.area_radius();
  const double mu = -8.0 / (rho * rho);

  // Generic low-degree start vector with components in several modes.
  Array v = project(Array(grid->cartesian(2) + 0.3 * grid->cartesian(0) +
                          0.1 * (grid->cartesian(1) * grid->cartesian(2))));
  v /= std::sqrt(dot_gamma(v, v));
  double lambda = dot_gamma(v, jacobi_apply(cs, v));
  for (int it = 0; it < 100; ++it) {
    Array u = project(shifted_solve(cs, v, mu, 1e-13));
    u /= std::sqrt(dot_gamma(u, u));
    const double lambda_new = dot_gamma(u, jacobi_apply(cs, u));
    const bool done = std::abs(lambda_new - lambda) <= tol && it >= 3;
    lambda = lambda_new;
    v = u;
    if (done) break;
  }
  return lambda;
}

NewtonResult newton_stcmc(const GridPtr& grid, const BackgroundModel& bg,
                          Array omega0, const NewtonOptions& opts) {
  NewtonResult res;
  Array omega = std::move(omega0);

  auto sup_residual = [&](const CrossSection& cs) {
    return (cs.h2() - cs.h2_mean()).abs().maxCoeff();
  };

  // The linearized constraint int ul_theta f dmu_gamma = 0 only holds the
  // area to first order; restore it exactly after every update so the
  // iteration targets the same fixed-area leaf as the flow.
  const double area0 = grid->integrate(omega.square());
  auto restore_area = [&](Array w) {
    return std::sqrt(area0 / grid->integrate(w.square())) * w;
  };

  CrossSection cs(grid, bg, omega);
  double r_prev = sup_residual(cs);
  res.residual_history.push_back(r_prev);

  for (int it = 0; it < opts.max_iter; ++it) {
    if (r_prev <= opts.tol) {
      res.converged = true;
      break;
    }
    // Affine elimination: f = (omega/2)(c u1 - u2) with J u1 = 1,
    // J u2 = H^2; the constant c enforces int ul_theta f dmu = 0,
    // i.e. int (c u1 - u2) dmu_gamma = 0.
    Array ones = Array::Ones(grid->n_nodes());
    SolveResult s1 = jacobi_solve(cs, ones, opts.solve);
    SolveResult s2 = jacobi_solve(cs, cs.h2(), opts.solve);
    if (!s1.converged || !s2.converged)
      throw std::runtime_error("linear solve in Newton step failed");
    const Array w2 = cs.omega().square();
    const double c = grid->integrate(s2.solution * w2) /
                     grid->integrate(s1.solution * w2);
    Array u = c * s1.solution - s2.solution;
    Array f = 0.5 * cs.omega() * u;

    // Damped update: halve until the sup residual decreases.
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      Array trial = restore_area(omega + step * f);
      if (trial.minCoeff() > 0.0) {
        CrossSection cs_trial(grid, bg, trial);
        const double r_trial = sup_residual(cs_trial);
        if (r_trial < r_prev) {
          omega = std::move(trial);
          cs = std::move(cs_trial);
          r_prev = r_trial;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    res.residual_history.push_back(r_prev);
    if (!accepted) break;  // stagnation: report current state
  }
  if (r_prev <= opts.tol) res.converged = true;
  res.omega = omega;
  res.h2_value = CrossSection(grid, bg, res.omega).h2_mean();
  return res;
}

}  // namespace nullcone
