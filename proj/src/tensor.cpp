#include "nullcone/tensor.hpp"

#include <stdexcept>

namespace nullcone {

TensorField TensorField::operator+(const TensorField& o) const {
  TensorField out = *this;
  for (size_t i = 0; i < comp_.size(); ++i) out.comp_[i] += o.comp_[i];
  return out;
}

TensorField TensorField::operator-(const TensorField& o) const {
  TensorField out = *this;
  for (size_t i = 0; i < comp_.size(); ++i) out.comp_[i] -= o.comp_[i];
  return out;
}

TensorField TensorField::scaled(const Array& factor) const {
  TensorField out = *this;
  for (auto& c : out.comp_) c *= factor;
  return out;
}

TensorField TensorField::scaled(double factor) const {
  TensorField out = *this;
  for (auto& c : out.comp_) c *= factor;
  return out;
}

Array TensorField::frame_norm() const {
  Array sq = Array::Zero(grid_->n_nodes());
  for (const auto& c : comp_) sq += c.square();
  return sq.sqrt();
}

TensorField TensorField::trace(int slot_a, int slot_b) const {
  if (rank_ < 2) throw std::logic_error("trace needs rank >= 2");
  TensorField out(grid_, rank_ - 2);
  const int ba = rank_ - 1 - slot_a, bb = rank_ - 1 - slot_b;
  for (int flat = 0; flat < (1 << rank_); ++flat) {
    if (((flat >> ba) & 1) != ((flat >> bb) & 1)) continue;
    // Remove the two contracted bits from the flat index.
    int rest = 0;
    for (int s = 0; s < rank_; ++s) {
      if (s == slot_a || s == slot_b) continue;
      rest = (rest << 1) | ((flat >> (rank_ - 1 - s)) & 1);
    }
    out.comp_[rest] += comp_[flat];
  }
  return out;
}

TensorField TensorField::symmetrized(int slot_a, int slot_b) const {
  TensorField out(grid_, rank_);
  const int ba = rank_ - 1 - slot_a, bb = rank_ - 1 - slot_b;
  for (int flat = 0; flat < (1 << rank_); ++flat) {
    int swapped = flat;
    const int va = (flat >> ba) & 1, vb = (flat >> bb) & 1;
    swapped &= ~((1 << ba) | (1 << bb));
    swapped |= (vb << ba) | (va << bb);
    out.comp_[flat] = 0.5 * (comp_[flat] + comp_[swapped]);
  }
  return out;
}

TensorField round_gradient(const GridPtr& grid, const Array& values) {
  TensorField g(grid, 1);
  Vector c = grid->analyze(values);
  grid->synthesize_gradient(c, g(0), g(1));
  return g;
}

TensorField round_hessian(const GridPtr& grid, const Array& values) {
  TensorField h(grid, 2);
  Vector c = grid->analyze(values);
  Array tt, tp, pp;
  grid->synthesize_hessian(c, tt, tp, pp);
  h(0, 0) = tt;
  h(0, 1) = tp;
  h(1, 0) = tp;
  h(1, 1) = pp;
  return h;
}

TensorField round_covariant_derivative(const TensorField& t) {
  const GridPtr& grid = t.grid();
  const int rank = t.rank();
  if (rank == 0) return round_gradient(grid, t.component(0));

  // Frame vectors as Cartesian arrays, indexed by frame label.
  auto frame = [&](int a, int axis) -> const Array& {
    return a == 0 ? grid->frame_theta(axis) : grid->frame_phi(axis);
  };

  // Cartesian components of the tangential extension: smooth scalars.
  int pow3 = 1;
  for (int s = 0; s < rank; ++s) pow3 *= 3;
  std::vector<Array> cart(pow3, Array::Zero(grid->n_nodes()));
  for (int p = 0; p < pow3; ++p) {
    // Decode base-3 axes, slot 0 most significant.
    int axes[8];
    int q = p;
    for (int s = rank - 1; s >= 0; --s) {
      axes[s] = q % 3;
      q /= 3;
    }
    for (int flat = 0; flat < (1 << rank); ++flat) {
      Array factor = Array::Ones(grid->n_nodes());
      for (int s = 0; s < rank; ++s)
        factor *= frame((flat >> (rank - 1 - s)) & 1, axes[s]);
      cart[p] += t.component(flat) * factor;
    }
  }

  // Frame derivatives of each Cartesian component.
  std::vector<Array> d_theta(pow3), d_phi(pow3);
  for (int p = 0; p < pow3; ++p) {
    Vector c = grid->analyze(cart[p]);
    grid->synthesize_gradient(c, d_theta[p], d_phi[p]);
  }

  // Contract back onto the frame: (DT)(a0; a1..an).
  TensorField out(grid, rank + 1);
  for (int flat = 0; flat < (1 << (rank + 1)); ++flat) {
    const int a0 = (flat >> rank) & 1;
    Array acc = Array::Zero(grid->n_nodes());
    for (int p = 0; p < pow3; ++p) {
      int axes[8];
      int q = p;
      for (int s = rank - 1; s >= 0; --s) {
        axes[s] = q % 3;
        q /= 3;
      }
      Array factor = Array::Ones(grid->n_nodes());
      for (int s = 0; s < rank; ++s)
        factor *= frame((flat >> (rank - 1 - s)) & 1, axes[s]);
      acc += (a0 == 0 ? d_theta[p] : d_phi[p]) * factor;
    }
    out.component(flat) = acc;
  }
  return out;
}

TensorField conformal_covariant_derivative(const TensorField& t,
                                           const Array& omega,
                                           const TensorField& d_omega) {
  TensorField out = round_covariant_derivative(t);
  const int rank = t.rank();
  if (rank == 0) return out;
  const GridPtr& grid = t.grid();
  const Array inv_omega = omega.inverse();

  // Difference tensor of the conformal metric omega^2 ghat:
  //   Q(X, Y) = (1/omega) (domega(X) Y + domega(Y) X - <X, Y> grad omega).
  // Subtract T(..., Q(e_a0, e_ak), ...) for every lower slot k.
  for (int flat = 0; flat < (1 << (rank + 1)); ++flat) {
    const int a0 = (flat >> rank) & 1;
    Array corr = Array::Zero(grid->n_nodes());
    for (int k = 0; k < rank; ++k) {
      const int ak = (flat >> (rank - 1 - k)) & 1;
      for (int c = 0; c < 2; ++c) {
        // Q^c(e_a0, e_ak)
        Array qc = Array::Zero(grid->n_nodes());
        if (c == ak) qc += d_omega(a0);
        if (c == a0) qc += d_omega(ak);
        if (a0 == ak) qc -= d_omega(c);
        qc *= inv_omega;
        const int base = flat & ((1 << rank) - 1);  // strip the new slot bit
        int replaced = base & ~(1 << (rank - 1 - k));
        replaced |= c << (rank - 1 - k);
        corr += t.component(replaced) * qc;
      }
    }
    out.component(flat) -= corr;
  }
  return out;
}

}  // namespace nullcone
