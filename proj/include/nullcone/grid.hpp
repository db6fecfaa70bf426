#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace nullcone {

using Array = Eigen::ArrayXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Index of the real harmonic (l, m) in a coefficient vector of size
// (L+1)^2.  Negative m labels the sin(|m| phi) component, positive m the
// cos(m phi) component, m = 0 the zonal part.
inline int sh_index(int l, int m) { return l * l + l + m; }

// Collocation grid on the unit sphere: Gauss-Legendre nodes in colatitude
// (poles excluded), uniform longitude starting at phi = 0.  Node storage is
// row-major with colatitude outer (ascending theta) and longitude inner.
//
// Sizes follow the 3/2-dealiasing rule: n_theta >= ceil(3L/2)+1 and
// n_phi >= 3L+1, so the quadrature integrates products of two band-limited
// fields against any retained harmonic without aliasing.
class SphereGrid {
 public:
  explicit SphereGrid(int bandlimit);

  int bandlimit() const { return L_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  int n_nodes() const { return n_theta_ * n_phi_; }
  int n_coeffs() const { return (L_ + 1) * (L_ + 1); }

  int node_index(int i_theta, int i_phi) const {
    return i_theta * n_phi_ + i_phi;
  }

  const Array& theta() const { return theta_; }
  const Array& cos_theta() const { return cos_theta_; }
  const Array& sin_theta() const { return sin_theta_; }
  const Array& phi() const { return phi_; }

  // Per-node value of a coordinate function on R^3 restricted to the sphere
  // (0 -> x, 1 -> y, 2 -> z), and the orthonormal frame vectors
  // e_theta, e_phi expressed in Cartesian components.
  const Array& cartesian(int axis) const { return cart_[axis]; }
  const Array& frame_theta(int axis) const { return e_theta_[axis]; }
  const Array& frame_phi(int axis) const { return e_phi_[axis]; }

  // cot(theta) per node row, broadcast to all nodes.
  const Array& cot_theta_nodes() const { return cot_nodes_; }
  const Array& inv_sin_theta_nodes() const { return inv_sin_nodes_; }

  // Quadrature of f over the round unit sphere.
  double integrate(const Array& values) const;

  // Forward transform: node values -> real orthonormal harmonic
  // coefficients (exact for band-limited input).
  Vector analyze(const Array& values) const;

  // Inverse transform: coefficients -> node values.
  Array synthesize(const Vector& coeffs) const;

  // Frame components (e_theta, e_phi) of the round gradient.
  void synthesize_gradient(const Vector& coeffs, Array& d_theta,
                           Array& d_phi) const;

  // Round Laplace-Beltrami operator, applied spectrally.
  Array synthesize_laplacian(const Vector& coeffs) const;

  // Frame components of the round covariant Hessian: H_tt, H_tp, H_pp.
  // Exact for band-limited input; the trace reproduces the Laplacian
  // identically at the level of the per-harmonic tables.
  void synthesize_hessian(const Vector& coeffs, Array& h_tt, Array& h_tp,
                          Array& h_pp) const;

  // Evaluate a coefficient vector at an arbitrary point (theta, phi).
  double evaluate(const Vector& coeffs, double theta, double phi) const;

  // Value of the real orthonormal harmonic Y_{lm} at every node.
  Array harmonic(int l, int m) const;

 private:
  // Synthesis core: per-order theta tables x trig factors.  If
  // phi_derivative is true the trig factor is differentiated in phi
  // (coupling cos <-> sin with a factor of m).
  Array synth_with_tables(const Vector& coeffs,
                          const std::vector<Matrix>& tables,
                          bool phi_derivative) const;

  int L_;
  int n_theta_, n_phi_;
  Array theta_, cos_theta_, sin_theta_, weight_;  // weights in x = cos(theta)
  Array phi_;
  Array cart_[3], e_theta_[3], e_phi_[3];
  Array cot_nodes_, inv_sin_nodes_;

  // plm_[m](l - m, i) = normalized associated Legendre P_lm(theta_i),
  // Condon-Shortley-free, orthonormal over the sphere together with the
  // trig factors.  dplm_ holds d/dtheta of the same functions.
  std::vector<Matrix> plm_, dplm_;
  // Extra tables for gradient/Hessian synthesis (see grid.cpp).
  std::vector<Matrix> plm_over_sin_, h_tt_, h_tp_, h_pp_;

  // trig_(j, L + m) = t_m(phi_j): 1/sqrt(2pi) for m = 0,
  // cos(m phi)/sqrt(pi) for m > 0, sin(|m| phi)/sqrt(pi) for m < 0.
  Matrix trig_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

}  // namespace nullcone
