#pragma once

#include "bsr/types.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace bsr {

/// One measurement's thermal film: frames[t] is an N_y x N_r image.
struct ThermalSequence {
  std::vector<Matrix> frames;
  double frame_rate = 1.0;
  double pixel_pitch = 1.0;

  Index n_y() const { return frames.empty() ? 0 : frames.front().rows(); }
  Index n_r() const { return frames.empty() ? 0 : frames.front().cols(); }
  Index n_t() const { return static_cast<Index>(frames.size()); }
  void validate() const;
};

/// Mean over the vertical axis: N_r x N_t profile.
Matrix vertical_mean(const ThermalSequence& seq);

/// Picks a frame index from a background-subtracted N_r x N_t profile whose
/// column 0 is the background.
using FrameSelector = std::function<Index(const Matrix& rise)>;

/// Largest spatial mean among frames 1..N_t-1; ties go to the earliest frame.
Index select_max_mean_rise(const Matrix& rise);

struct Thermogram {
  Vector values;
  Index frame = 0;
};

/// Maximum thermogram: subtracts frame 0 from every frame, selects a frame
/// (default: largest mean rise) and returns that background-subtracted column.
/// With a single frame the raw frame passes through.
Thermogram maximum_thermogram(const Matrix& profile, const FrameSelector& select = select_max_mean_rise);

/// Stacks one reduced vector per measurement into an N_r x N_meas matrix.
MeasurementSet assemble_measurements(const std::vector<Vector>& reduced);

/// Reads a sequence stored as a (N_y, N_r, N_t) matrix file.
ThermalSequence load_sequence(const std::filesystem::path& path);
void save_sequence(const std::filesystem::path& path, const ThermalSequence& seq);

}  // namespace bsr
