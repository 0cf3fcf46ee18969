#pragma once

// Inner loops shared by the linear models, the thresholding operator and the
// unrolled network. Every kernel exists twice: `serial` is the reference path
// used by the tests, `parallel` distributes independent columns, taps or
// blocks over OpenMP threads. Both run the same per-item arithmetic in the
// same order, so their results are bit-identical for any thread count.

#include "bsr/types.hpp"

#include <span>

namespace bsr::kernels {

// Same-size, zero-padded 1D convolution of one contiguous column:
//   out[k] = sum_j taps[j] * in[k + c - j],  c = (taps.size() - 1) / 2.
void conv_column(std::span<const double> taps, const double* in, double* out, Index n);

// Exact transpose of conv_column (cross-correlation):
//   out[i] = sum_j taps[j] * in[i + j - c].
void correlate_column(std::span<const double> taps, const double* in, double* out, Index n);

// d/d taps[j] of <upstream, conv(taps, in)> summed over all columns:
//   sum_cols sum_k upstream[k] * in[k + c - j].
double conv_tap_gradient(Index j, Index n_taps, const Matrix& upstream, const Matrix& in);

/// Addressing of the blocks inside a flat buffer. Element m of block k in
/// group g lives at k*stride_block + m*stride_elem + g*stride_group.
struct BlockLayout {
  Index n_blocks = 0;
  Index block_size = 0;
  Index n_groups = 1;
  Index stride_block = 1;
  Index stride_elem = 0;
  Index stride_group = 0;

  Index total() const { return n_blocks * block_size * n_groups; }

  /// Rows are blocks of a column-major (rows x cols) matrix; groups are
  /// consecutive runs of `cols` columns.
  static BlockLayout rows_of(Index rows, Index cols, Index groups = 1);
  /// Blocks are consecutive runs of `block_size` entries of each column of a
  /// (n_blocks*block_size x groups) matrix.
  static BlockLayout contiguous(Index n_blocks, Index block_size, Index groups = 1);
};

namespace serial {

void conv_same(std::span<const double> taps, const Matrix& in, Matrix& out);
void correlate_same(std::span<const double> taps, const Matrix& in, Matrix& out);
/// grad[j] += conv_tap_gradient(j, ...)
void conv_kernel_gradient(const Matrix& upstream, const Matrix& in, std::span<double> grad);

void block_norms(const BlockLayout& layout, const double* x, double* norms);
void block_threshold(const BlockLayout& layout, const double* x, double lambda, double* out);
/// Writes dx and returns d/dlambda, summed in ascending (group, block) order.
double block_threshold_vjp(const BlockLayout& layout, const double* x, double lambda,
                           const double* upstream, double* dx);

}  // namespace serial

namespace parallel {

void conv_same(std::span<const double> taps, const Matrix& in, Matrix& out);
void correlate_same(std::span<const double> taps, const Matrix& in, Matrix& out);
void conv_kernel_gradient(const Matrix& upstream, const Matrix& in, std::span<double> grad);

void block_norms(const BlockLayout& layout, const double* x, double* norms);
void block_threshold(const BlockLayout& layout, const double* x, double lambda, double* out);
double block_threshold_vjp(const BlockLayout& layout, const double* x, double lambda,
                           const double* upstream, double* dx);

}  // namespace parallel

/// Upper bound on worker threads used by the parallel kernels (0 = OpenMP default).
void set_max_threads(int n);
int max_threads();

}  // namespace bsr::kernels
