#pragma once

// Run configuration documents. Every document is a JSON object with
// "schema_version" (must equal kSchemaVersion), an optional "seed" and one
// section per command. Unknown keys anywhere are rejected with ConfigError.

#include "bsr/datagen.hpp"
#include "bsr/serialize.hpp"
#include "bsr/train.hpp"

#include <optional>
#include <string>

namespace bsr {

inline constexpr int kSchemaVersion = 1;

/// {"schema_version", "seed", "gaussian": {n_r, n_meas, n_d, n_train, n_test, pnz, snr_db}}
GaussianCaseConfig gaussian_config_from_json(const Json& doc);
Json to_json(const GaussianCaseConfig& cfg);

/// {"schema_version", "seed", "thermal": {n_r, n_meas, n_train, n_test, defect_width,
///  defect_pnz, absorption_low, absorption_high, line_width, illum_pnz, snr_db,
///  pixel_pitch, "psf": {diffusivity, evaluation_time, pulse_length, amplitude,
///  kernel_radius}}}
ThermalCaseConfig thermal_config_from_json(const Json& doc);
Json to_json(const ThermalCaseConfig& cfg);

/// Training section. "gamma" may be omitted, in which case the caller fills
/// in the model default; `gamma_given` reports which happened.
struct TrainDocument {
  TrainConfig train;
  bool gamma_given = false;
};

/// {"schema_version", "seed", "train": {layers, gamma, lambda0, rate, refinements,
///  max_iter, mode}}. The mode is supplied separately; a "mode" key in the
/// document must agree with it.
TrainDocument train_config_from_json(const Json& doc, Mode mode);
/// Resolved document (including schema_version and seed).
Json to_document(const TrainConfig& cfg);

}  // namespace bsr
