#pragma once

#include "bsr/linop.hpp"
#include "bsr/types.hpp"

namespace bsr {

/// Euclidean norm of every row (block) of x.
Vector block_norms(const MMVSignal& x);

/// Sum of the row norms (the l2,1 norm).
double l21_norm(const MMVSignal& x);

/// ||apply(model, x) - t||_F^2 + lambda * l21_norm(x)
double objective(const LinearModel& model, const MMVSignal& x, const MeasurementSet& t, double lambda);

/// Soft block thresholding: row k is scaled by max{0, 1 - lambda/||row k||};
/// all-zero rows stay zero. Any finite lambda is accepted; lambda < 0 rescales
/// every nonzero row by a factor above one.
MMVSignal block_soft_threshold(const MMVSignal& x, double lambda);

struct ThresholdVjp {
  MMVSignal dx;
  double dlambda = 0.0;
};

/// Reverse-mode derivative of block_soft_threshold against `upstream`.
/// Rows with ||row|| <= lambda (lambda > 0) and zero rows contribute nothing;
/// the boundary ||row|| == lambda takes the zero branch.
ThresholdVjp block_soft_threshold_vjp(const MMVSignal& x, double lambda, const MMVSignal& upstream);

}  // namespace bsr
