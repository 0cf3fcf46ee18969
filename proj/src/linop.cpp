#include "bsr/linop.hpp"

#include "bsr/kernels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace bsr {

void ConvKernel::validate() const {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw DimensionError("convolution kernel length must be odd, got " + std::to_string(taps.size()));
  }
  for (double t : taps) {
    if (!std::isfinite(t)) throw ConfigError("convolution kernel has non-finite taps");
  }
}

void DenseModel::validate() const {
  if (entries.rows() < 1) throw DimensionError("dense model needs at least one row");
  if (block_count < 1 || block_size < 1 || block_count * block_size != entries.cols()) {
    throw DimensionError("dense model: block_count * block_size must equal the column count");
  }
  if (!entries.allFinite()) throw ConfigError("dense model has non-finite entries");
}

LinearModel LinearModel::conv(ConvKernel kernel, Index n_r, Index n_meas) {
  kernel.validate();
  if (n_r < 1 || n_meas < 1) throw DimensionError("signal dimensions must be positive");
  return LinearModel(std::move(kernel), {n_r, n_meas}, {n_r, n_meas});
}

LinearModel LinearModel::dense(DenseModel model) {
  model.validate();
  const Shape signal{model.block_count, model.block_size};
  const Shape data{model.entries.rows(), 1};
  return LinearModel(std::move(model), signal, data);
}

LinearModel LinearModel::reshaped(Index n_r, Index n_meas) const {
  if (!is_conv()) throw DimensionError("a dense model has a fixed signal shape");
  return conv(kernel(), n_r, n_meas);
}

Vector vectorize(const Matrix& x) {
  Vector v(x.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), x.rows(), x.cols()) = x;
  return v;
}

Matrix devectorize(const Vector& v, Shape shape) {
  if (v.size() != shape.rows * shape.cols) throw DimensionError("devectorize: size mismatch");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), shape.rows, shape.cols);
}

MeasurementSet apply(const LinearModel& model, const MMVSignal& x) {
  require_shape(x, model.signal_shape(), "apply");
  if (model.is_conv()) {
    Matrix out;
    kernels::serial::conv_same(model.kernel().taps, x, out);
    return out;
  }
  return model.dense_model().entries * vectorize(x);
}

MMVSignal adjoint(const LinearModel& model, const MeasurementSet& r) {
  require_shape(r, model.data_shape(), "adjoint");
  if (model.is_conv()) {
    Matrix out;
    kernels::serial::correlate_same(model.kernel().taps, r, out);
    return out;
  }
  const Vector v = model.dense_model().entries.transpose() * r.col(0);
  return devectorize(v, model.signal_shape());
}

double lipschitz_bound(const LinearModel& model) {
  if (model.is_conv()) {
    const auto& taps = model.kernel().taps;
    const Index nk = static_cast<Index>(taps.size());
    const Index n = model.signal_shape().rows + nk - 1;
    double best = 0.0;
    for (Index f = 0; f < n; ++f) {
      std::complex<double> acc{0.0, 0.0};
      for (Index j = 0; j < nk; ++j) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((f * j) % n) /
                             static_cast<double>(n);
        acc += taps[j] * std::polar(1.0, phase);
      }
      best = std::max(best, std::norm(acc));
    }
    return best;
  }

  const Matrix& a = model.dense_model().entries;
  // Power iteration only approaches the top eigenvalue from below, and slowly
  // when the leading singular values cluster. Small Gram matrices are solved exactly.
  constexpr Index kExactGramLimit = 1024;
  if (std::min(a.rows(), a.cols()) <= kExactGramLimit) {
    const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
  }

  constexpr int kMaxIter = 200;
  constexpr double kTol = 1e-10;
  // Deterministic start vector with no special alignment to the singular basis.
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector w = a.transpose() * (a * v);
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    const bool converged = std::abs(next - estimate) <= kTol * std::abs(next);
    estimate = next;
    if (converged) break;
  }
  // Final Rayleigh quotient on the last normalized iterate.
  return std::max(estimate, (a * v).squaredNorm());
}

Matrix materialize_dense(const LinearModel& model) {
  const Shape s = model.signal_shape();
  const Index n = s.rows * s.cols;
  if (n > kMaterializeLimit) {
    throw DimensionError("materialize_dense refuses signals with more than " +
                         std::to_string(kMaterializeLimit) + " entries");
  }
  if (!model.is_conv()) return model.dense_model().entries;

  const auto& taps = model.kernel().taps;
  const Index nk = static_cast<Index>(taps.size());
  const Index c = (nk - 1) / 2;
  Matrix m = Matrix::Zero(n, n);
  for (Index k = 0; k < s.rows; ++k) {
    for (Index i = 0; i < s.rows; ++i) {
      const Index j = k - i + c;
      if (j < 0 || j >= nk) continue;
      for (Index col = 0; col < s.cols; ++col) m(k * s.cols + col, i * s.cols + col) = taps[j];
    }
  }
  return m;
}

}  // namespace bsr
