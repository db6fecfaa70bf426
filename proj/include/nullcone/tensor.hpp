#pragma once

#include "nullcone/grid.hpp"

namespace nullcone {

// Covariant tensor field tangent to the sphere, stored as components with
// respect to the orthonormal round frame (e_theta, e_phi).  Rank 0 holds a
// single scalar component.  Component storage is flat binary: slot 0 is the
// most significant bit of the component index.
class TensorField {
 public:
  TensorField() = default;
  TensorField(GridPtr grid, int rank)
      : grid_(std::move(grid)), rank_(rank), comp_(1 << rank) {
    for (auto& c : comp_) c = Array::Zero(grid_->n_nodes());
  }
  static TensorField scalar(GridPtr grid, Array values) {
    TensorField f(std::move(grid), 0);
    f.comp_[0] = std::move(values);
    return f;
  }

  int rank() const { return rank_; }
  const GridPtr& grid() const { return grid_; }

  Array& component(int flat) { return comp_[flat]; }
  const Array& component(int flat) const { return comp_[flat]; }
  // Slot indices are 0 (e_theta) / 1 (e_phi), slot 0 first.
  template <typename... Ix>
  Array& operator()(Ix... ix) {
    return comp_[flatten(ix...)];
  }
  template <typename... Ix>
  const Array& operator()(Ix... ix) const {
    return comp_[flatten(ix...)];
  }

  TensorField operator+(const TensorField& o) const;
  TensorField operator-(const TensorField& o) const;
  TensorField scaled(const Array& factor) const;
  TensorField scaled(double factor) const;

  // Pointwise Frobenius norm of the frame components; equals the tensor
  // norm with respect to the round metric.  For the metric conformal to
  // omega^2 ghat, scale by omega^{-rank}.
  Array frame_norm() const;

  // Trace over two slots with the round (identity) frame metric.
  TensorField trace(int slot_a, int slot_b) const;

  // Symmetrize over two slots.
  TensorField symmetrized(int slot_a, int slot_b) const;

 private:
  template <typename... Ix>
  int flatten(Ix... ix) const {
    int flat = 0;
    ((flat = (flat << 1) | ix), ...);
    return flat;
  }
  GridPtr grid_;
  int rank_ = 0;
  std::vector<Array> comp_;
};

// Round gradient of a scalar field as a rank-1 tensor (exact spectral).
TensorField round_gradient(const GridPtr& grid, const Array& values);

// Round covariant Hessian of a scalar (exact spectral tables).
TensorField round_hessian(const GridPtr& grid, const Array& values);

// Round covariant derivative of an arbitrary tensor field; the new slot
// comes first: (D T)(a0; a1..an).  Implemented by differentiating the
// Cartesian components of the tangential extension, which are smooth
// scalars on the sphere, so the result is spectrally accurate.
TensorField round_covariant_derivative(const TensorField& t);

// Covariant derivative with respect to the conformal metric omega^2 ghat.
// omega and its frame gradient are passed in; for rank 0 this is just the
// round gradient.
TensorField conformal_covariant_derivative(const TensorField& t,
                                           const Array& omega,
                                           const TensorField& d_omega);

}  // namespace nullcone
