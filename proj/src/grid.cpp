#include "nullcone/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nullcone {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, Array& x, Array& w) {
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    // Tricomi-style initial guess, refined by Newton.
    double z = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * z * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[k] = z;
    w[k] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace

SphereGrid::SphereGrid(int bandlimit) : L_(bandlimit) {
  if (L_ < 1) throw std::invalid_argument("bandlimit must be >= 1");
  n_theta_ = (3 * L_ + 1) / 2 + 1;  // ceil(3L/2) + 1
  n_phi_ = 3 * L_ + 1;

  Array x, w;
  gauss_legendre(n_theta_, x, w);
  // Nodes ascending in theta means descending in x = cos(theta).
  theta_.resize(n_theta_);
  cos_theta_.resize(n_theta_);
  weight_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i) {
    cos_theta_[i] = x[n_theta_ - 1 - i];
    weight_[i] = w[n_theta_ - 1 - i];
    theta_[i] = std::acos(cos_theta_[i]);
  }
  sin_theta_ = (1.0 - cos_theta_.square()).sqrt();

  phi_.resize(n_phi_);
  for (int j = 0; j < n_phi_; ++j) phi_[j] = 2.0 * kPi * j / n_phi_;

  // Node-resolved geometric helpers.
  const int n = n_nodes();
  for (int a = 0; a < 3; ++a) {
    cart_[a].resize(n);
    e_theta_[a].resize(n);
    e_phi_[a].resize(n);
  }
  cot_nodes_.resize(n);
  inv_sin_nodes_.resize(n);
  for (int i = 0; i < n_theta_; ++i) {
    const double st = sin_theta_[i], ct = cos_theta_[i];
    for (int j = 0; j < n_phi_; ++j) {
      const int p = node_index(i, j);
      const double cp = std::cos(phi_[j]), sp = std::sin(phi_[j]);
      cart_[0][p] = st * cp;
      cart_[1][p] = st * sp;
      cart_[2][p] = ct;
      e_theta_[0][p] = ct * cp;
      e_theta_[1][p] = ct * sp;
      e_theta_[2][p] = -st;
      e_phi_[0][p] = -sp;
      e_phi_[1][p] = cp;
      e_phi_[2][p] = 0.0;
      cot_nodes_[p] = ct / st;
      inv_sin_nodes_[p] = 1.0 / st;
    }
  }

  // Trig factors.
  trig_.resize(n_phi_, 2 * L_ + 1);
  const double c0 = 1.0 / std::sqrt(2.0 * kPi);
  const double c1 = 1.0 / std::sqrt(kPi);
  for (int j = 0; j < n_phi_; ++j) {
    trig_(j, L_) = c0;
    for (int m = 1; m <= L_; ++m) {
      trig_(j, L_ + m) = c1 * std::cos(m * phi_[j]);
      trig_(j, L_ - m) = c1 * std::sin(m * phi_[j]);
    }
  }

  // Normalized associated Legendre tables, Condon-Shortley-free.  With the
  // trig factors above, Y_lm = plm(theta) * t_m(phi) is orthonormal, so
  // int_0^pi plm^2 sin(theta) dtheta = 1.
  plm_.resize(L_ + 1);
  dplm_.resize(L_ + 1);
  plm_over_sin_.resize(L_ + 1);
  h_tt_.resize(L_ + 1);
  h_tp_.resize(L_ + 1);
  h_pp_.resize(L_ + 1);
  for (int m = 0; m <= L_; ++m) {
    const int rows = L_ + 1 - m;
    plm_[m].resize(rows, n_theta_);
    dplm_[m].resize(rows, n_theta_);
  }
  for (int i = 0; i < n_theta_; ++i) {
    const double ct = cos_theta_[i], st = sin_theta_[i];
    // Sectorial seeds p_mm and the diagonal recurrence upward in l.
    double pmm = 1.0 / std::sqrt(2.0);  // l = m = 0 (normalization: 1/sqrt(2))
    for (int m = 0; m <= L_; ++m) {
      if (m > 0) pmm *= st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      double p_prev = 0.0, p_cur = pmm;
      for (int l = m; l <= L_; ++l) {
        plm_[m](l - m, i) = p_cur;
        // d/dtheta via the stable lowering relation.
        double low = (l > m) ? p_prev : 0.0;
        double c = (l > 0) ? std::sqrt((2.0 * l + 1.0) *
                                       (double(l) * l - double(m) * m) /
                                       (2.0 * l - 1.0))
                           : 0.0;
        dplm_[m](l - m, i) = (l * ct * p_cur - c * low) / st;
        if (l < L_) {
          double a = std::sqrt((4.0 * (l + 1.0) * (l + 1.0) - 1.0) /
                               ((l + 1.0) * (l + 1.0) - double(m) * m));
          double b = (l > m) ? std::sqrt((double(l) * l - double(m) * m) /
                                         (4.0 * l * l - 1.0))
                             : 0.0;
          double p_next = a * (ct * p_cur - b * p_prev);
          p_prev = p_cur;
          p_cur = p_next;
        }
      }
    }
  }
  // Derived tables for gradient and Hessian synthesis.  The second
  // theta-derivative is eliminated with the associated Legendre ODE
  //   p'' = -cot(theta) p' + (m^2/sin^2 - l(l+1)) p,
  // so every table is built exactly from plm and dplm.
  for (int m = 0; m <= L_; ++m) {
    const int rows = L_ + 1 - m;
    plm_over_sin_[m].resize(rows, n_theta_);
    h_tt_[m].resize(rows, n_theta_);
    h_tp_[m].resize(rows, n_theta_);
    h_pp_[m].resize(rows, n_theta_);
    for (int i = 0; i < n_theta_; ++i) {
      const double st = sin_theta_[i];
      const double cot = cos_theta_[i] / st;
      for (int r = 0; r < rows; ++r) {
        const int l = m + r;
        const double p = plm_[m](r, i), dp = dplm_[m](r, i);
        const double lam = double(l) * (l + 1);
        const double m2s2 = double(m) * m / (st * st);
        plm_over_sin_[m](r, i) = p / st;
        h_tt_[m](r, i) = -cot * dp + (m2s2 - lam) * p;   // f_{,theta theta}
        h_pp_[m](r, i) = -m2s2 * p + cot * dp;           // e_phi e_phi part
        h_tp_[m](r, i) = (dp - cot * p) / st;            // carries phi-deriv
      }
    }
  }
}

double SphereGrid::integrate(const Array& values) const {
  double total = 0.0;
  for (int i = 0; i < n_theta_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_phi_; ++j) row += values[node_index(i, j)];
    total += weight_[i] * row;
  }
  return total * (2.0 * kPi / n_phi_);
}

Vector SphereGrid::analyze(const Array& values) const {
  Eigen::Map<const Matrix> f(values.data(), n_phi_, n_theta_);
  // Longitude stage: g(i, L+m) = sum_j f(i, j) t_m(phi_j) * (2pi/n_phi).
  Matrix g = (trig_.transpose() * f).transpose() * (2.0 * kPi / n_phi_);
  Vector coeffs = Vector::Zero(n_coeffs());
  for (int m = 0; m <= L_; ++m) {
    Vector gm = g.col(L_ + m).cwiseProduct(weight_.matrix());
    Vector am = plm_[m] * gm;
    for (int l = m; l <= L_; ++l) coeffs[sh_index(l, m)] = am[l - m];
    if (m > 0) {
      Vector gs = g.col(L_ - m).cwiseProduct(weight_.matrix());
      Vector as = plm_[m] * gs;
      for (int l = m; l <= L_; ++l) coeffs[sh_index(l, -m)] = as[l - m];
    }
  }
  return coeffs;
}

Array SphereGrid::synth_with_tables(const Vector& coeffs,
                                    const std::vector<Matrix>& tables,
                                    bool phi_derivative) const {
  // Latitude stage: per order m collapse degrees onto theta nodes, then
  // multiply by trig factors.  A phi-derivative swaps cos <-> sin columns
  // with the factor m built in.
  Matrix g = Matrix::Zero(n_theta_, 2 * L_ + 1);
  for (int m = 0; m <= L_; ++m) {
    Vector ac(L_ + 1 - m), as(L_ + 1 - m);
    for (int l = m; l <= L_; ++l) {
      ac[l - m] = coeffs[sh_index(l, m)];
      if (m > 0) as[l - m] = coeffs[sh_index(l, -m)];
    }
    Vector gc = tables[m].transpose() * ac;
    if (!phi_derivative) {
      g.col(L_ + m) += gc;
      if (m > 0) g.col(L_ - m) += tables[m].transpose() * as;
    } else if (m > 0) {
      // d/dphi: cos(m phi) -> -m sin(m phi), sin(m phi) -> m cos(m phi).
      g.col(L_ - m) += -double(m) * gc;
      g.col(L_ + m) += double(m) * (tables[m].transpose() * as);
    }
  }
  Matrix f = trig_ * g.transpose();  // n_phi x n_theta
  Array out(n_nodes());
  Eigen::Map<Matrix>(out.data(), n_phi_, n_theta_) = f;
  return out;
}

Array SphereGrid::synthesize(const Vector& coeffs) const {
  return synth_with_tables(coeffs, plm_, false);
}

void SphereGrid::synthesize_gradient(const Vector& coeffs, Array& d_theta,
                                     Array& d_phi) const {
  d_theta = synth_with_tables(coeffs, dplm_, false);
  d_phi = synth_with_tables(coeffs, plm_over_sin_, true);
}

Array SphereGrid::synthesize_laplacian(const Vector& coeffs) const {
  Vector scaled = coeffs;
  for (int l = 0; l <= L_; ++l)
    for (int m = -l; m <= l; ++m)
      scaled[sh_index(l, m)] *= -double(l) * (l + 1);
  return synthesize(scaled);
}

void SphereGrid::synthesize_hessian(const Vector& coeffs, Array& h_tt,
                                    Array& h_tp, Array& h_pp) const {
  h_tt = synth_with_tables(coeffs, h_tt_, false);
  h_tp = synth_with_tables(coeffs, h_tp_, true);
  h_pp = synth_with_tables(coeffs, h_pp_, false);
}

double SphereGrid::evaluate(const Vector& coeffs, double theta,
                            double phi) const {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double c0 = 1.0 / std::sqrt(2.0 * kPi);
  const double c1 = 1.0 / std::sqrt(kPi);
  double total = 0.0;
  double pmm = 1.0 / std::sqrt(2.0);
  for (int m = 0; m <= L_; ++m) {
    if (m > 0) pmm *= st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    const double tc = (m == 0) ? c0 : c1 * std::cos(m * phi);
    const double ts = c1 * std::sin(m * phi);
    double p_prev = 0.0, p_cur = pmm;
    for (int l = m; l <= L_; ++l) {
      double cm = coeffs[sh_index(l, m)] * tc;
      if (m > 0) cm += coeffs[sh_index(l, -m)] * ts;
      total += cm * p_cur;
      if (l < L_) {
        double a = std::sqrt((4.0 * (l + 1.0) * (l + 1.0) - 1.0) /
                             ((l + 1.0) * (l + 1.0) - double(m) * m));
        double b = std::sqrt((double(l) * l - double(m) * m) /
                             (4.0 * l * l - 1.0));
        double p_next = a * (ct * p_cur - b * p_prev);
        p_prev = p_cur;
        p_cur = p_next;
      }
    }
  }
  return total;
}

Array SphereGrid::harmonic(int l, int m) const {
  Vector c = Vector::Zero(n_coeffs());
  c[sh_index(l, m)] = 1.0;
  return synthesize(c);
}

}  // namespace nullcone
