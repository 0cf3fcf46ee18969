#pragma once

#include "bsr/linop.hpp"
#include "bsr/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bsr {

/// Ground truth and data for a set of problem instances sharing one model.
struct ProblemSet {
  std::vector<MMVSignal> x;
  std::vector<MeasurementSet> y;
  std::vector<Vector> defect;  // absorption patterns (thermal case only)

  std::size_t size() const { return x.size(); }
};

// Case 1: Y = A vec(X) + noise with a Gaussian A.

struct GaussianCaseConfig {
  Index n_r = 32;
  Index n_meas = 32;
  Index n_d = 128;
  Index n_train = 150;
  Index n_test = 250;
  double pnz = 0.1;
  double snr_db = 20.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GaussianProblem {
  LinearModel model;
  ProblemSet train;
  ProblemSet test;
  double noise_variance = 0.0;
};

/// A entries ~ N(0, 1/N_d); each block active with probability pnz, active
/// entries ~ N(0, 1); noise variance mu^2 / 10^(snr/10) with
/// mu^2 = pnz * N_r * N_meas / N_d.
GaussianProblem gen_gaussian_problem(const GaussianCaseConfig& cfg);

// Case 2: photothermal convolution with a surrogate PSF.

struct ThermalPSFConfig {
  double diffusivity = 4.0;       // length^2 / time (mm^2/s)
  double evaluation_time = 0.01;  // time (s)
  double pulse_length = 0.02;     // time (s)
  double amplitude = 1.0;
  Index kernel_radius = 30;  // taps

  void validate() const;
};

struct ThermalCaseConfig {
  Index n_r = 1280;
  Index n_meas = 150;
  Index n_train = 150;
  Index n_test = 50;
  double defect_width = 1.0;  // mm
  double defect_pnz = 0.01;
  double absorption_low = 0.0;
  double absorption_high = 1.0;
  double line_width = 0.8;  // mm
  double illum_pnz = 0.01;
  double snr_db = 8.0;
  double pixel_pitch = 0.05;  // mm
  ThermalPSFConfig psf;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ThermalProblem {
  LinearModel model;
  ProblemSet train;
  ProblemSet test;
  double noise_variance = 0.0;
  double signal_power = 0.0;  // mean squared clean measurement (SNR reference)
  std::vector<std::string> warnings;
};

/// Width in pixels of a run of physical width `width` (at least one pixel).
Index run_pixels(double width, double pixel_pitch);

/// Paints runs of `width_px` pixels centred on every flagged position at `high`,
/// `low` elsewhere. Overlapping runs merge; runs are clipped at the edges.
Vector paint_runs(Index n, const std::vector<Index>& centers, Index width_px, double low, double high);

/// Per-pixel Bernoulli(p) run centres.
std::vector<Index> draw_centers(Index n, double p, Rng& rng);

Vector gen_defect_pattern(const ThermalCaseConfig& cfg, Rng& rng);
Vector gen_illumination(const ThermalCaseConfig& cfg, Rng& rng);

/// Normalized Gaussian surrogate for the reduced thermal PSF:
/// k(r) ~ exp(-(r pitch)^2 / (4 alpha t_eff)), t_eff = t_eval + pulse/2, scaled to
/// sum to `amplitude` over |r| <= kernel_radius. A radius holding less than
/// 99.9% of the untruncated mass adds a message to `warnings`.
ConvKernel thermal_psf(const ThermalPSFConfig& cfg, double pixel_pitch,
                       std::vector<std::string>* warnings = nullptr);

/// Columns x^m = I^m * a (elementwise); Y = Phi * X + noise. The SNR reference
/// is the mean squared clean measurement over all generated elements.
ThermalProblem gen_thermal_problem(const ThermalCaseConfig& cfg);

}  // namespace bsr
