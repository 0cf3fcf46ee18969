#pragma once

#include "bsr/types.hpp"

#include <variant>
#include <vector>

namespace bsr {

/// Spatial blur kernel applied as a same-size, zero-padded convolution.
struct ConvKernel {
  std::vector<double> taps;  // odd length, centre tap at (size-1)/2
  double pixel_pitch = 1.0;  // length units per tap; metadata only

  Index size() const { return static_cast<Index>(taps.size()); }
  Index radius() const { return (size() - 1) / 2; }
  void validate() const;
};

/// Dense forward matrix acting on the row-major vectorization of an
/// (block_count x block_size) signal, so each block is contiguous.
struct DenseModel {
  Matrix entries;  // N_d x (block_count * block_size)
  Index block_count = 0;
  Index block_size = 0;

  void validate() const;
};

class LinearModel {
 public:
  static LinearModel conv(ConvKernel kernel, Index n_r, Index n_meas);
  static LinearModel dense(DenseModel model);

  bool is_conv() const { return std::holds_alternative<ConvKernel>(variant_); }
  const ConvKernel& kernel() const { return std::get<ConvKernel>(variant_); }
  const DenseModel& dense_model() const { return std::get<DenseModel>(variant_); }

  /// (N_r, N_meas)
  Shape signal_shape() const { return signal_; }
  /// (N_r, N_meas) for convolution, (N_d, 1) for dense.
  Shape data_shape() const { return data_; }

  /// Same operator bound to a different signal shape (convolution only).
  LinearModel reshaped(Index n_r, Index n_meas) const;

 private:
  LinearModel(std::variant<DenseModel, ConvKernel> v, Shape signal, Shape data)
      : variant_(std::move(v)), signal_(signal), data_(data) {}

  std::variant<DenseModel, ConvKernel> variant_;
  Shape signal_;
  Shape data_;
};

MeasurementSet apply(const LinearModel& model, const MMVSignal& x);
MMVSignal adjoint(const LinearModel& model, const MeasurementSet& r);

/// Upper bound on the squared spectral norm of the operator.
///
/// Convolution: max |DFT|^2 of the kernel zero-padded to N_r + N_k - 1. The
/// same-size operator is a submatrix of that circulant, so the bound holds.
/// Dense: exact eigenvalue of the smaller Gram matrix when its side is at most
/// 1024, power iteration on A^T A (200 iterations, relative tolerance 1e-10) beyond.
double lipschitz_bound(const LinearModel& model);

inline constexpr Index kMaterializeLimit = 4096;

/// Explicit matrix acting on row-major vectorizations. Refuses signals with
/// more than kMaterializeLimit entries.
Matrix materialize_dense(const LinearModel& model);

/// Row-major vectorization: entry (k, m) goes to k * cols + m.
Vector vectorize(const Matrix& x);
Matrix devectorize(const Vector& v, Shape shape);

}  // namespace bsr
