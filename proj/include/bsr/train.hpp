#pragma once

#include "bsr/lbista.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bsr {

enum class VarKind { lambda, S, B };

/// One trainable variable: a layer threshold, or an S / B weight slot.
struct VarRef {
  VarKind kind = VarKind::lambda;
  Index index = 0;

  friend bool operator==(const VarRef&, const VarRef&) = default;
};

std::string to_string(VarRef v);

/// Variables trained in the stage for layer output `stage` (0..K). Stage 0 is
/// empty; tied stage i holds lambda^(i-1); untied stage i holds S^(i-1),
/// B^(i-1) and lambda^(i-1).
std::vector<VarRef> stage_variables(const NetworkParams& p, Index stage);

/// Full variable set: every S and B slot plus every threshold.
std::vector<VarRef> all_variables(const NetworkParams& p);

std::span<double> values(NetworkParams& p, VarRef v);
std::span<const double> values(const NetworkParams& p, VarRef v);

/// Same structure as `p` with every trainable value zero.
NetworkParams zero_gradients(const NetworkParams& p);

/// 1/2 sum ||xhat - xstar||^2 over positions and measurements, averaged over
/// the elements of the packed batch.
double loss(const Matrix& xhat, const Matrix& xstar, Index n_elems);

/// Exact gradient of loss(tape.x[depth], xstar) with respect to every
/// variable (or only those listed in `only`; the rest stay zero).
NetworkParams backprop(const NetworkParams& params, const ForwardTape& tape, const Matrix& xstar,
                       Exec exec = Exec::parallel, const std::vector<VarRef>* only = nullptr);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

/// Fresh state with zero moments shaped like `params`.
AdamState make_adam(double lr, const std::vector<std::span<double>>& params);

/// One bias-corrected Adam update in place.
void adam_step(AdamState& state, const std::vector<std::span<double>>& params,
               const std::vector<std::span<const double>>& grads);

struct TrainConfig {
  Mode mode = Mode::tied;
  Index layers = 6;
  double gamma = 1.0 / 1.4142135623730951;
  double lambda0 = 4e-3;
  double rate = 1e-3;
  std::vector<double> refinements{0.5, 0.1, 0.05};
  long max_iter = 100000;
  std::uint64_t seed = 0;  // recorded only; training itself is deterministic
  Exec exec = Exec::parallel;

  void validate() const;
};

struct TrainSet {
  Matrix x;  // packed ground truth
  Matrix y;  // packed data
  Index n_elems = 0;

  static TrainSet pack(const BatchShape& shape, const std::vector<MMVSignal>& xs,
                       const std::vector<MeasurementSet>& ys);
};

struct StageRecord {
  Index layer = 0;
  std::string kind;  // "layer" or "refine"
  double rate = 0.0;
  std::vector<VarRef> variables;
  std::vector<double> loss;  // loss before each step
};

struct TrainReport {
  Mode mode = Mode::tied;
  std::vector<StageRecord> stages;
  std::vector<double> final_lambda;
  long total_steps = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;

  double initial_loss() const;
  double final_loss() const;
};

using StageCallback = std::function<void(const StageRecord&)>;

/// Layerwise schedule: for i = 0..K, train the stage variables on the loss at
/// depth i, then run every refinement f on the full variable set at rate
/// rate * f. Each loop runs max_iter Adam steps with its own fresh state.
std::pair<NetworkParams, TrainReport> train_layerwise(const TrainSet& data, const LinearModel& model,
                                                      const TrainConfig& cfg,
                                                      const StageCallback& on_stage = {});

/// Continues the schedule from given parameters.
TrainReport train_layerwise(NetworkParams& params, const TrainSet& data, const TrainConfig& cfg,
                            const StageCallback& on_stage = {});

}  // namespace bsr
