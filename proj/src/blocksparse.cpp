#include "bsr/blocksparse.hpp"

#include "bsr/kernels.hpp"

#include <cmath>

namespace bsr {

Vector block_norms(const MMVSignal& x) {
  Vector norms(x.rows());
  kernels::serial::block_norms(kernels::BlockLayout::rows_of(x.rows(), x.cols()), x.data(),
                               norms.data());
  return norms;
}

double l21_norm(const MMVSignal& x) {
  const Vector norms = block_norms(x);
  double sum = 0.0;
  for (Index k = 0; k < norms.size(); ++k) sum += norms[k];
  return sum;
}

double objective(const LinearModel& model, const MMVSignal& x, const MeasurementSet& t, double lambda) {
  require_shape(t, model.data_shape(), "objective data");
  return (apply(model, x) - t).squaredNorm() + lambda * l21_norm(x);
}

MMVSignal block_soft_threshold(const MMVSignal& x, double lambda) {
  if (!std::isfinite(lambda)) throw ConfigError("threshold must be finite");
  MMVSignal out(x.rows(), x.cols());
  kernels::serial::block_threshold(kernels::BlockLayout::rows_of(x.rows(), x.cols()), x.data(),
                                   lambda, out.data());
  return out;
}

ThresholdVjp block_soft_threshold_vjp(const MMVSignal& x, double lambda, const MMVSignal& upstream) {
  require_shape(upstream, shape_of(x), "threshold vjp upstream");
  ThresholdVjp r;
  r.dx.resize(x.rows(), x.cols());
  r.dlambda = kernels::serial::block_threshold_vjp(
      kernels::BlockLayout::rows_of(x.rows(), x.cols()), x.data(), lambda, upstream.data(),
      r.dx.data());
  return r;
}

}  // namespace bsr
