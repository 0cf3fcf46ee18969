#include "bsr/weights.hpp"

#include "bsr/kernels.hpp"

namespace bsr {
namespace {

void add_corners(const ConvWeight& w, const Matrix& in, Matrix& out, bool transpose) {
  for (const auto& cb : w.boundary) {
    const Index n = cb.block.rows();
    if (transpose) {
      out.middleRows(cb.offset, n).noalias() += cb.block.transpose() * in.middleRows(cb.offset, n);
    } else {
      out.middleRows(cb.offset, n).noalias() += cb.block * in.middleRows(cb.offset, n);
    }
  }
}

}  // namespace

Matrix weight_apply(const Weight& w, const Matrix& in, Exec exec) {
  if (const auto* cw = std::get_if<ConvWeight>(&w)) {
    Matrix out;
    if (exec == Exec::parallel) kernels::parallel::conv_same(cw->taps, in, out);
    else kernels::serial::conv_same(cw->taps, in, out);
    add_corners(*cw, in, out, false);
    return out;
  }
  const auto& m = std::get<Matrix>(w);
  if (m.cols() != in.rows()) throw DimensionError("weight_apply: inner dimension mismatch");
  return m * in;
}

Matrix weight_apply_adjoint(const Weight& w, const Matrix& in, Exec exec) {
  if (const auto* cw = std::get_if<ConvWeight>(&w)) {
    Matrix out;
    if (exec == Exec::parallel) kernels::parallel::correlate_same(cw->taps, in, out);
    else kernels::serial::correlate_same(cw->taps, in, out);
    add_corners(*cw, in, out, true);
    return out;
  }
  const auto& m = std::get<Matrix>(w);
  if (m.rows() != in.rows()) throw DimensionError("weight_apply_adjoint: dimension mismatch");
  return m.transpose() * in;
}

void weight_accumulate_grad(Weight& grad, const Matrix& upstream, const Matrix& in, Exec exec) {
  if (auto* cw = std::get_if<ConvWeight>(&grad)) {
    if (exec == Exec::parallel) kernels::parallel::conv_kernel_gradient(upstream, in, cw->taps);
    else kernels::serial::conv_kernel_gradient(upstream, in, cw->taps);
    return;
  }
  auto& m = std::get<Matrix>(grad);
  if (m.rows() != upstream.rows() || m.cols() != in.rows() || upstream.cols() != in.cols()) {
    throw DimensionError("weight gradient shape mismatch");
  }
  m.noalias() += upstream * in.transpose();
}

std::span<double> trainable_values(Weight& w) {
  if (auto* cw = std::get_if<ConvWeight>(&w)) return cw->taps;
  auto& m = std::get<Matrix>(w);
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<const double> trainable_values(const Weight& w) {
  if (const auto* cw = std::get_if<ConvWeight>(&w)) return cw->taps;
  const auto& m = std::get<Matrix>(w);
  return {m.data(), static_cast<std::size_t>(m.size())};
}

Weight zeros_like(const Weight& w) {
  if (const auto* cw = std::get_if<ConvWeight>(&w)) {
    return ConvWeight{std::vector<double>(cw->taps.size(), 0.0), {}};
  }
  const auto& m = std::get<Matrix>(w);
  return Matrix(Matrix::Zero(m.rows(), m.cols()));
}

Matrix weight_matrix(const Weight& w, Index n) {
  if (std::holds_alternative<Matrix>(w)) return std::get<Matrix>(w);
  return weight_apply(w, Matrix::Identity(n, n), Exec::serial);
}

}  // namespace bsr
