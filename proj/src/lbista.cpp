#include "bsr/lbista.hpp"

#include <cmath>

namespace bsr {

std::string_view to_string(Mode m) { return m == Mode::tied ? "tied" : "untied"; }

Mode mode_from_string(std::string_view s) {
  if (s == "tied") return Mode::tied;
  if (s == "untied") return Mode::untied;
  throw ConfigError("mode must be 'tied' or 'untied', got '" + std::string(s) + "'");
}

BatchShape BatchShape::of(const LinearModel& model) {
  const Shape s = model.signal_shape();
  return {model.is_conv(), s.rows, s.cols, model.data_shape().rows};
}

kernels::BlockLayout BatchShape::layout(Index n_elems) const {
  if (conv) return kernels::BlockLayout::rows_of(n_r, n_meas, n_elems);
  return kernels::BlockLayout::contiguous(n_r, n_meas, n_elems);
}

Matrix BatchShape::pack_signals(const std::vector<MMVSignal>& xs) const {
  const Index per = cols_per_element();
  Matrix out(signal_rows(), per * static_cast<Index>(xs.size()));
  for (std::size_t b = 0; b < xs.size(); ++b) {
    require_shape(xs[b], {n_r, n_meas}, "packed signal");
    if (conv) {
      out.middleCols(static_cast<Index>(b) * per, per) = xs[b];
    } else {
      out.col(static_cast<Index>(b)) = vectorize(xs[b]);
    }
  }
  return out;
}

Matrix BatchShape::pack_data(const std::vector<MeasurementSet>& ys) const {
  const Index per = cols_per_element();
  Matrix out(data_rows, per * static_cast<Index>(ys.size()));
  for (std::size_t b = 0; b < ys.size(); ++b) {
    require_shape(ys[b], {data_rows, per}, "packed data");
    out.middleCols(static_cast<Index>(b) * per, per) = ys[b];
  }
  return out;
}

MMVSignal BatchShape::unpack_signal(const Matrix& packed, Index element) const {
  if (conv) return packed.middleCols(element * n_meas, n_meas);
  return devectorize(packed.col(element), {n_r, n_meas});
}

std::vector<MMVSignal> BatchShape::unpack_signals(const Matrix& packed) const {
  std::vector<MMVSignal> out;
  const Index n = element_count(packed);
  out.reserve(static_cast<std::size_t>(n));
  for (Index b = 0; b < n; ++b) out.push_back(unpack_signal(packed, b));
  return out;
}

void NetworkParams::validate() const {
  if (layers < 1) throw ConfigError("network needs at least one layer");
  const std::size_t slots = mode == Mode::tied ? 1 : static_cast<std::size_t>(layers);
  if (B.size() != slots || S.size() != slots) throw ConfigError("weight count does not match mode");
  if (lambda.size() != static_cast<std::size_t>(layers)) throw ConfigError("one threshold per layer required");
  for (double l : lambda) {
    if (!std::isfinite(l)) throw NumericalAbort("non-finite threshold");
  }
  for (const auto* ws : {&B, &S}) {
    for (const auto& w : *ws) {
      if (std::holds_alternative<ConvWeight>(w) != shape.conv) throw ConfigError("weight kind mismatch");
      for (double v : trainable_values(w)) {
        if (!std::isfinite(v)) throw NumericalAbort("non-finite weight");
      }
    }
  }
}

namespace {

// Kernel-offset form: phi(d) = taps[d + c], |d| <= c.
double tap_at(const std::vector<double>& taps, Index d) {
  const Index c = (static_cast<Index>(taps.size()) - 1) / 2;
  if (d < -c || d > c) return 0.0;
  return taps[static_cast<std::size_t>(d + c)];
}

// Energy that a same-size zero-padded Phi pushes outside [0, n): the
// difference between the full autocorrelation Toeplitz and Phi^T Phi. It only
// touches the first and last c rows and columns.
std::vector<CornerBlock> truncation_corners(const std::vector<double>& taps, Index n, double scale) {
  const Index c = (static_cast<Index>(taps.size()) - 1) / 2;
  std::vector<CornerBlock> out;
  if (c == 0) return out;
  auto corner = [&](Index offset, Index size, Index k_lo, Index k_hi) {
    CornerBlock cb{offset, Matrix::Zero(size, size)};
    for (Index i = 0; i < size; ++i) {
      for (Index j = 0; j < size; ++j) {
        double e = 0.0;
        for (Index k = k_lo; k < k_hi; ++k) e += tap_at(taps, k - (offset + i)) * tap_at(taps, k - (offset + j));
        cb.block(i, j) = scale * e;
      }
    }
    out.push_back(std::move(cb));
  };
  const Index size = std::min(c, n);
  corner(0, size, -c, 0);
  corner(n - size, size, n, n + c);
  return out;
}

Matrix zeros_packed(Index rows, Index cols) { return Matrix::Zero(rows, cols); }

}  // namespace

NetworkParams init_params(const LinearModel& model, double gamma, double lambda0, Index layers, Mode mode) {
  if (layers < 1) throw ConfigError("K must be at least 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  if (!std::isfinite(lambda0)) throw ConfigError("lambda0 must be finite");

  NetworkParams p;
  p.mode = mode;
  p.layers = layers;
  p.shape = BatchShape::of(model);
  p.lambda.assign(static_cast<std::size_t>(layers), lambda0);

  Weight b, s;
  if (model.is_conv()) {
    const auto& taps = model.kernel().taps;
    const Index nk = static_cast<Index>(taps.size());
    const Index c = (nk - 1) / 2;
    ConvWeight bw;
    bw.taps.resize(taps.size());
    for (Index j = 0; j < nk; ++j) bw.taps[j] = 2.0 * gamma * taps[static_cast<std::size_t>(nk - 1 - j)];

    // S taps: delta(d) - 2 gamma R(d), R the kernel autocorrelation, |d| <= 2c.
    ConvWeight sw;
    sw.taps.assign(static_cast<std::size_t>(2 * nk - 1), 0.0);
    for (Index d = -2 * c; d <= 2 * c; ++d) {
      double r = 0.0;
      for (Index u = -c; u <= c; ++u) r += tap_at(taps, u) * tap_at(taps, u + d);
      sw.taps[static_cast<std::size_t>(d + 2 * c)] = (d == 0 ? 1.0 : 0.0) - 2.0 * gamma * r;
    }
    sw.boundary = truncation_corners(taps, p.shape.n_r, 2.0 * gamma);
    b = std::move(bw);
    s = std::move(sw);
  } else {
    const Matrix& a = model.dense_model().entries;
    Matrix bm = 2.0 * gamma * a.transpose();
    Matrix sm = Matrix::Identity(a.cols(), a.cols()) - bm * a;
    b = std::move(bm);
    s = std::move(sm);
  }
  const std::size_t slots = mode == Mode::tied ? 1 : static_cast<std::size_t>(layers);
  p.B.assign(slots, b);
  p.S.assign(slots, s);
  return p;
}

ForwardTape forward_tape(const NetworkParams& params, const Matrix& y_packed, Index depth, Exec exec) {
  if (depth < 0 || depth > params.layers) throw DimensionError("depth must lie in [0, K]");
  const BatchShape& sh = params.shape;
  if (y_packed.rows() != sh.data_rows || y_packed.cols() % sh.cols_per_element() != 0) {
    throw DimensionError("forward: packed data has shape " + to_string(shape_of(y_packed)));
  }
  ForwardTape t;
  t.depth = depth;
  t.n_elems = sh.element_count(y_packed);
  t.y = y_packed;
  const kernels::BlockLayout layout = sh.layout(t.n_elems);
  const Index rows = sh.signal_rows();
  const Index cols = sh.cols_per_element() * t.n_elems;

  const bool tied = params.mode == Mode::tied;
  if (tied) {
    t.by.push_back(weight_apply(params.B[0], y_packed, exec));
  } else {
    for (Index i = 0; i < std::max<Index>(depth, 0); ++i) t.by.push_back(weight_apply(params.B[i], y_packed, exec));
  }

  t.z.resize(static_cast<std::size_t>(depth + 1));
  t.x.resize(static_cast<std::size_t>(depth + 1));
  t.x[0] = tied ? t.by[0] : zeros_packed(rows, cols);
  for (Index i = 1; i <= depth; ++i) {
    const Index slot = params.weight_slot(i - 1);
    const Matrix& by = t.by[static_cast<std::size_t>(slot)];
    if (i == 1) {
      // Tied: x_1 = eta(B y). Untied: S^(0) x_0 vanishes because x_0 = 0.
      t.z[1] = by;
    } else {
      t.z[i] = weight_apply(params.S[slot], t.x[i - 1], exec);
      t.z[i] += by;
    }
    t.x[i].resize(rows, cols);
    const double lam = params.lambda[static_cast<std::size_t>(i - 1)];
    if (exec == Exec::parallel) kernels::parallel::block_threshold(layout, t.z[i].data(), lam, t.x[i].data());
    else kernels::serial::block_threshold(layout, t.z[i].data(), lam, t.x[i].data());
  }
  return t;
}

Matrix forward_batch(const NetworkParams& params, const Matrix& y_packed, Index depth, Exec exec) {
  ForwardTape t = forward_tape(params, y_packed, depth, exec);
  return std::move(t.x.back());
}

MMVSignal forward(const NetworkParams& params, const MeasurementSet& y, std::optional<Index> depth, Exec exec) {
  const Matrix packed = params.shape.pack_data({y});
  const Matrix out = forward_batch(params, packed, depth.value_or(params.layers), exec);
  return params.shape.unpack_signal(out, 0);
}

}  // namespace bsr
