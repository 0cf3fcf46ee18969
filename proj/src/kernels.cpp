#include "bsr/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace bsr::kernels {
namespace {

void require_odd(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) throw DimensionError("kernel length must be odd");
}

// Valid k range for shift s (= c - j): 0 <= k < n and 0 <= k + s < n.
inline void shifted_range(Index s, Index n, Index& lo, Index& hi) {
  lo = std::max<Index>(0, -s);
  hi = std::min<Index>(n, n - s);
}

inline double block_norm_at(const BlockLayout& l, const double* x, Index base) {
  double sq = 0.0;
  for (Index m = 0; m < l.block_size; ++m) {
    const double v = x[base + m * l.stride_elem];
    sq += v * v;
  }
  return std::sqrt(sq);
}

inline Index block_base(const BlockLayout& l, Index g, Index k) {
  return k * l.stride_block + g * l.stride_group;
}

inline double block_scale(double norm, double lambda) {
  if (norm == 0.0) return 0.0;
  return std::max(0.0, 1.0 - lambda / norm);
}

inline void threshold_block(const BlockLayout& l, const double* x, double lambda, double* out,
                            Index g, Index k) {
  const Index base = block_base(l, g, k);
  const double s = block_scale(block_norm_at(l, x, base), lambda);
  for (Index m = 0; m < l.block_size; ++m) {
    const Index i = base + m * l.stride_elem;
    out[i] = s * x[i];
  }
}

// Returns the dlambda contribution of one block.
inline double vjp_block(const BlockLayout& l, const double* x, double lambda, const double* u,
                        double* dx, Index g, Index k) {
  const Index base = block_base(l, g, k);
  const double norm = block_norm_at(l, x, base);
  if (norm == 0.0 || (lambda > 0.0 && norm <= lambda)) {
    for (Index m = 0; m < l.block_size; ++m) dx[base + m * l.stride_elem] = 0.0;
    return 0.0;
  }
  double xu = 0.0;
  for (Index m = 0; m < l.block_size; ++m) {
    const Index i = base + m * l.stride_elem;
    xu += x[i] * u[i];
  }
  const double s = 1.0 - lambda / norm;
  const double c = lambda * xu / (norm * norm * norm);
  for (Index m = 0; m < l.block_size; ++m) {
    const Index i = base + m * l.stride_elem;
    dx[i] = s * u[i] + c * x[i];
  }
  return -xu / norm;
}

void check_conv_io(std::span<const double> taps, const Matrix& in, Matrix& out) {
  require_odd(taps);
  if (out.rows() != in.rows() || out.cols() != in.cols()) out.resize(in.rows(), in.cols());
}

int g_max_threads = 0;

}  // namespace

BlockLayout BlockLayout::rows_of(Index rows, Index cols, Index groups) {
  return {rows, cols, groups, 1, rows, rows * cols};
}

BlockLayout BlockLayout::contiguous(Index n_blocks, Index block_size, Index groups) {
  return {n_blocks, block_size, groups, block_size, 1, n_blocks * block_size};
}

void conv_column(std::span<const double> taps, const double* in, double* out, Index n) {
  const Index nk = static_cast<Index>(taps.size());
  const Index c = (nk - 1) / 2;
  std::fill(out, out + n, 0.0);
  for (Index j = 0; j < nk; ++j) {
    const double h = taps[j];
    if (h == 0.0) continue;
    Index lo, hi;
    const Index s = c - j;
    shifted_range(s, n, lo, hi);
    for (Index k = lo; k < hi; ++k) out[k] += h * in[k + s];
  }
}

void correlate_column(std::span<const double> taps, const double* in, double* out, Index n) {
  const Index nk = static_cast<Index>(taps.size());
  const Index c = (nk - 1) / 2;
  std::fill(out, out + n, 0.0);
  for (Index j = 0; j < nk; ++j) {
    const double h = taps[j];
    if (h == 0.0) continue;
    Index lo, hi;
    const Index s = j - c;
    shifted_range(s, n, lo, hi);
    for (Index i = lo; i < hi; ++i) out[i] += h * in[i + s];
  }
}

double conv_tap_gradient(Index j, Index n_taps, const Matrix& upstream, const Matrix& in) {
  const Index n = in.rows();
  const Index c = (n_taps - 1) / 2;
  const Index s = c - j;
  Index lo, hi;
  shifted_range(s, n, lo, hi);
  double total = 0.0;
  for (Index col = 0; col < in.cols(); ++col) {
    const double* u = upstream.col(col).data();
    const double* x = in.col(col).data();
    double acc = 0.0;
    for (Index k = lo; k < hi; ++k) acc += u[k] * x[k + s];
    total += acc;
  }
  return total;
}

namespace serial {

void conv_same(std::span<const double> taps, const Matrix& in, Matrix& out) {
  check_conv_io(taps, in, out);
  for (Index col = 0; col < in.cols(); ++col)
    conv_column(taps, in.col(col).data(), out.col(col).data(), in.rows());
}

void correlate_same(std::span<const double> taps, const Matrix& in, Matrix& out) {
  check_conv_io(taps, in, out);
  for (Index col = 0; col < in.cols(); ++col)
    correlate_column(taps, in.col(col).data(), out.col(col).data(), in.rows());
}

void conv_kernel_gradient(const Matrix& upstream, const Matrix& in, std::span<double> grad) {
  if (shape_of(upstream) != shape_of(in)) throw DimensionError("kernel gradient shape mismatch");
  const auto nk = static_cast<Index>(grad.size());
  for (Index j = 0; j < nk; ++j) grad[j] += conv_tap_gradient(j, nk, upstream, in);
}

void block_norms(const BlockLayout& l, const double* x, double* norms) {
  for (Index g = 0; g < l.n_groups; ++g)
    for (Index k = 0; k < l.n_blocks; ++k)
      norms[g * l.n_blocks + k] = block_norm_at(l, x, block_base(l, g, k));
}

void block_threshold(const BlockLayout& l, const double* x, double lambda, double* out) {
  for (Index g = 0; g < l.n_groups; ++g)
    for (Index k = 0; k < l.n_blocks; ++k) threshold_block(l, x, lambda, out, g, k);
}

double block_threshold_vjp(const BlockLayout& l, const double* x, double lambda,
                           const double* upstream, double* dx) {
  double dlambda = 0.0;
  for (Index g = 0; g < l.n_groups; ++g)
    for (Index k = 0; k < l.n_blocks; ++k) dlambda += vjp_block(l, x, lambda, upstream, dx, g, k);
  return dlambda;
}

}  // namespace serial

namespace parallel {

void conv_same(std::span<const double> taps, const Matrix& in, Matrix& out) {
  check_conv_io(taps, in, out);
  const Index cols = in.cols();
#pragma omp parallel for schedule(static)
  for (Index col = 0; col < cols; ++col)
    conv_column(taps, in.col(col).data(), out.col(col).data(), in.rows());
}

void correlate_same(std::span<const double> taps, const Matrix& in, Matrix& out) {
  check_conv_io(taps, in, out);
  const Index cols = in.cols();
#pragma omp parallel for schedule(static)
  for (Index col = 0; col < cols; ++col)
    correlate_column(taps, in.col(col).data(), out.col(col).data(), in.rows());
}

void conv_kernel_gradient(const Matrix& upstream, const Matrix& in, std::span<double> grad) {
  if (shape_of(upstream) != shape_of(in)) throw DimensionError("kernel gradient shape mismatch");
  const auto nk = static_cast<Index>(grad.size());
  // Each tap owns its reduction, so no cross-thread summation happens.
#pragma omp parallel for schedule(dynamic, 1)
  for (Index j = 0; j < nk; ++j) grad[j] += conv_tap_gradient(j, nk, upstream, in);
}

void block_norms(const BlockLayout& l, const double* x, double* norms) {
  const Index total = l.n_groups * l.n_blocks;
#pragma omp parallel for schedule(static)
  for (Index gk = 0; gk < total; ++gk) {
    const Index g = gk / l.n_blocks, k = gk % l.n_blocks;
    norms[gk] = block_norm_at(l, x, block_base(l, g, k));
  }
}

void block_threshold(const BlockLayout& l, const double* x, double lambda, double* out) {
  const Index total = l.n_groups * l.n_blocks;
#pragma omp parallel for schedule(static)
  for (Index gk = 0; gk < total; ++gk)
    threshold_block(l, x, lambda, out, gk / l.n_blocks, gk % l.n_blocks);
}

double block_threshold_vjp(const BlockLayout& l, const double* x, double lambda,
                           const double* upstream, double* dx) {
  const Index total = l.n_groups * l.n_blocks;
  std::vector<double> parts(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (Index gk = 0; gk < total; ++gk)
    parts[gk] = vjp_block(l, x, lambda, upstream, dx, gk / l.n_blocks, gk % l.n_blocks);
  double dlambda = 0.0;
  for (double p : parts) dlambda += p;
  return dlambda;
}

}  // namespace parallel

void set_max_threads(int n) {
  g_max_threads = n;
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return g_max_threads > 0 ? g_max_threads : omp_get_max_threads(); }

}  // namespace bsr::kernels
