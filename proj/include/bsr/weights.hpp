#pragma once

#include "bsr/types.hpp"

#include <span>
#include <variant>
#include <vector>

namespace bsr {

enum class Exec { serial, parallel };

/// Fixed additive square block: out[offset:offset+n] += block * in[offset:offset+n]
/// for every column.
struct CornerBlock {
  Index offset = 0;
  Matrix block;
};

/// Operator-shaped weight of the convolution network: a same-size kernel plus
/// fixed (non-trainable) corner corrections. The corrections carry the part of
/// a composed zero-padded operator that a single kernel cannot express near
/// the field-of-view edges.
struct ConvWeight {
  std::vector<double> taps;
  std::vector<CornerBlock> boundary;
};

/// Either a convolution weight or a dense matrix acting on packed columns.
using Weight = std::variant<ConvWeight, Matrix>;

Matrix weight_apply(const Weight& w, const Matrix& in, Exec exec = Exec::parallel);
Matrix weight_apply_adjoint(const Weight& w, const Matrix& in, Exec exec = Exec::parallel);

/// grad += d<upstream, weight_apply(w, in)>/dw over the trainable values
/// (kernel taps, or every matrix entry).
void weight_accumulate_grad(Weight& grad, const Matrix& upstream, const Matrix& in,
                            Exec exec = Exec::parallel);

/// Trainable values of a weight (taps, or matrix storage).
std::span<double> trainable_values(Weight& w);
std::span<const double> trainable_values(const Weight& w);

/// Same structure with zero trainable values and no corner corrections.
Weight zeros_like(const Weight& w);

/// Materialized action on one column of length n (tests and serialization checks).
Matrix weight_matrix(const Weight& w, Index n);

}  // namespace bsr
