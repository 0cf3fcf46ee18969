#pragma once

#include "bsr/kernels.hpp"
#include "bsr/linop.hpp"
#include "bsr/weights.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace bsr {

enum class Mode { tied, untied };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

/// How one problem instance is laid out inside a packed batch matrix.
///
/// Convolution: signals and data are N_r x N_meas, and a batch of N_B elements
/// is the N_r x (N_meas * N_B) matrix of their columns side by side.
/// Dense: each signal is row-major vectorized into one column of length
/// N_r * N_meas, each data element is one column of length N_d.
struct BatchShape {
  bool conv = true;
  Index n_r = 0;
  Index n_meas = 0;
  Index data_rows = 0;  // N_r (convolution) or N_d (dense)

  static BatchShape of(const LinearModel& model);

  Index signal_rows() const { return conv ? n_r : n_r * n_meas; }
  Index cols_per_element() const { return conv ? n_meas : 1; }
  Index element_count(const Matrix& packed) const { return packed.cols() / cols_per_element(); }
  kernels::BlockLayout layout(Index n_elems) const;

  Matrix pack_signals(const std::vector<MMVSignal>& xs) const;
  Matrix pack_data(const std::vector<MeasurementSet>& ys) const;
  std::vector<MMVSignal> unpack_signals(const Matrix& packed) const;
  MMVSignal unpack_signal(const Matrix& packed, Index element) const;
};

/// Trainable variables of the unrolled network. Tied mode keeps one S and one
/// B shared by all layers; untied mode keeps one per layer. There is always
/// one threshold per layer.
struct NetworkParams {
  Mode mode = Mode::tied;
  Index layers = 0;
  BatchShape shape;
  std::vector<Weight> B;
  std::vector<Weight> S;
  std::vector<double> lambda;

  /// Slot of S and B used by layer `layer` (0-based).
  Index weight_slot(Index layer) const { return mode == Mode::tied ? 0 : layer; }
  void validate() const;
};

/// Initialization that makes every layer one Block-ISTA iteration:
/// B = 2 gamma Phi^T, S = I - B Phi, lambda^(i) = lambda0.
///
/// Convolution: B holds the flipped kernel scaled by 2 gamma (N_k taps), S the
/// centred impulse minus the composed kernel (2 N_k - 1 taps) plus the fixed
/// corner corrections, so that S x = x - B (Phi x) holds exactly.
/// Dense: B = 2 gamma A^T, S = I - B A.
NetworkParams init_params(const LinearModel& model, double gamma, double lambda0, Index layers, Mode mode);

/// Per-layer intermediates of one forward pass over a packed batch.
///
/// x[0] is the layer-0 output: B y in tied mode, zero in untied mode.
/// For i = 1..depth, z[i] is the pre-threshold input of layer i and x[i] its output.
struct ForwardTape {
  Index depth = 0;
  Index n_elems = 0;
  Matrix y;
  std::vector<Matrix> by;  // B y, one per weight slot used
  std::vector<Matrix> z;   // z[0] unused
  std::vector<Matrix> x;
};

ForwardTape forward_tape(const NetworkParams& params, const Matrix& y_packed, Index depth,
                         Exec exec = Exec::parallel);

/// Output after `depth` layers (packed batch in, packed batch out).
Matrix forward_batch(const NetworkParams& params, const Matrix& y_packed, Index depth,
                     Exec exec = Exec::parallel);

/// Output for a single measurement set after `depth` layers (default: all).
MMVSignal forward(const NetworkParams& params, const MeasurementSet& y,
                  std::optional<Index> depth = std::nullopt, Exec exec = Exec::parallel);

}  // namespace bsr
