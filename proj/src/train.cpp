#include "bsr/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace bsr {

std::string to_string(VarRef v) {
  switch (v.kind) {
    case VarKind::lambda: return "lambda[" + std::to_string(v.index) + "]";
    case VarKind::S: return "S[" + std::to_string(v.index) + "]";
    case VarKind::B: return "B[" + std::to_string(v.index) + "]";
  }
  return "?";
}

std::vector<VarRef> stage_variables(const NetworkParams& p, Index stage) {
  if (stage < 0 || stage > p.layers) throw ConfigError("stage out of range");
  if (stage == 0) return {};
  if (p.mode == Mode::tied) return {{VarKind::lambda, stage - 1}};
  return {{VarKind::S, stage - 1}, {VarKind::B, stage - 1}, {VarKind::lambda, stage - 1}};
}

std::vector<VarRef> all_variables(const NetworkParams& p) {
  std::vector<VarRef> out;
  for (Index i = 0; i < static_cast<Index>(p.S.size()); ++i) out.push_back({VarKind::S, i});
  for (Index i = 0; i < static_cast<Index>(p.B.size()); ++i) out.push_back({VarKind::B, i});
  for (Index i = 0; i < p.layers; ++i) out.push_back({VarKind::lambda, i});
  return out;
}

std::span<double> values(NetworkParams& p, VarRef v) {
  switch (v.kind) {
    case VarKind::lambda: return {&p.lambda.at(static_cast<std::size_t>(v.index)), 1};
    case VarKind::S: return trainable_values(p.S.at(static_cast<std::size_t>(v.index)));
    case VarKind::B: return trainable_values(p.B.at(static_cast<std::size_t>(v.index)));
  }
  return {};
}

std::span<const double> values(const NetworkParams& p, VarRef v) {
  return values(const_cast<NetworkParams&>(p), v);
}

NetworkParams zero_gradients(const NetworkParams& p) {
  NetworkParams g;
  g.mode = p.mode;
  g.layers = p.layers;
  g.shape = p.shape;
  for (const auto& w : p.B) g.B.push_back(zeros_like(w));
  for (const auto& w : p.S) g.S.push_back(zeros_like(w));
  g.lambda.assign(p.lambda.size(), 0.0);
  return g;
}

double loss(const Matrix& xhat, const Matrix& xstar, Index n_elems) {
  require_shape(xhat, shape_of(xstar), "loss");
  if (n_elems < 1) throw DimensionError("loss needs at least one element");
  return 0.5 * (xhat - xstar).squaredNorm() / static_cast<double>(n_elems);
}

NetworkParams backprop(const NetworkParams& params, const ForwardTape& tape, const Matrix& xstar,
                       Exec exec, const std::vector<VarRef>* only) {
  require_shape(xstar, shape_of(tape.x.back()), "backprop target");
  if (tape.y.rows() != params.shape.data_rows) throw DimensionError("stale tape");
  NetworkParams g = zero_gradients(params);
  const Index depth = tape.depth;
  const bool tied = params.mode == Mode::tied;

  auto wanted = [&](VarRef v) {
    return only == nullptr || std::find(only->begin(), only->end(), v) != only->end();
  };
  // Earliest layer whose variables are requested; the reverse sweep stops there.
  Index earliest = depth + 1;
  for (Index i = 1; i <= depth; ++i) {
    const Index slot = params.weight_slot(i - 1);
    if (wanted({VarKind::lambda, i - 1}) || wanted({VarKind::B, slot}) ||
        (i >= 2 && wanted({VarKind::S, slot}))) {
      earliest = std::min(earliest, i);
    }
  }

  const double scale = 1.0 / static_cast<double>(tape.n_elems);
  Matrix upstream = (tape.x[static_cast<std::size_t>(depth)] - xstar) * scale;

  if (depth == 0) {
    // Tied x_0 = B y; untied x_0 = 0 carries no gradient.
    if (tied && wanted({VarKind::B, 0})) weight_accumulate_grad(g.B[0], upstream, tape.y, exec);
    return g;
  }

  const kernels::BlockLayout layout = params.shape.layout(tape.n_elems);
  Matrix dz(upstream.rows(), upstream.cols());
  Matrix dz_sum_tied;  // tied B receives the sum of all layer upstreams
  const bool want_tied_b = tied && wanted({VarKind::B, 0});
  if (want_tied_b) dz_sum_tied = Matrix::Zero(upstream.rows(), upstream.cols());

  for (Index i = depth; i >= earliest; --i) {
    const auto li = static_cast<std::size_t>(i);
    const Index slot = params.weight_slot(i - 1);
    const double lam = params.lambda[li - 1];
    const double dlam =
        exec == Exec::parallel
            ? kernels::parallel::block_threshold_vjp(layout, tape.z[li].data(), lam, upstream.data(), dz.data())
            : kernels::serial::block_threshold_vjp(layout, tape.z[li].data(), lam, upstream.data(), dz.data());
    if (wanted({VarKind::lambda, i - 1})) g.lambda[li - 1] = dlam;

    if (tied) {
      if (want_tied_b) dz_sum_tied += dz;
    } else if (wanted({VarKind::B, slot})) {
      weight_accumulate_grad(g.B[static_cast<std::size_t>(slot)], dz, tape.y, exec);
    }
    if (i >= 2) {
      if (wanted({VarKind::S, slot})) {
        weight_accumulate_grad(g.S[static_cast<std::size_t>(slot)], dz, tape.x[li - 1], exec);
      }
      if (i > earliest) upstream = weight_apply_adjoint(params.S[static_cast<std::size_t>(slot)], dz, exec);
    }
  }
  if (want_tied_b) weight_accumulate_grad(g.B[0], dz_sum_tied, tape.y, exec);
  return g;
}

AdamState make_adam(double lr, const std::vector<std::span<double>>& params) {
  AdamState s;
  s.lr = lr;
  for (const auto& p : params) {
    s.m.emplace_back(p.size(), 0.0);
    s.v.emplace_back(p.size(), 0.0);
  }
  return s;
}

void adam_step(AdamState& s, const std::vector<std::span<double>>& params,
               const std::vector<std::span<const double>>& grads) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw DimensionError("adam_step: parameter/gradient count mismatch");
  }
  ++s.t;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k];
    auto g = grads[k];
    auto& m = s.m[k];
    auto& v = s.v[k];
    if (p.size() != g.size() || p.size() != m.size()) throw DimensionError("adam_step: shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
      v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
    }
  }
}

void TrainConfig::validate() const {
  if (layers < 1) throw ConfigError("K must be at least 1");
  if (!(rate > 0.0)) throw ConfigError("training rate must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!std::isfinite(lambda0)) throw ConfigError("lambda0 must be finite");
  for (double f : refinements) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("refinement factors must lie in (0, 1]");
  }
}

TrainSet TrainSet::pack(const BatchShape& shape, const std::vector<MMVSignal>& xs,
                        const std::vector<MeasurementSet>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw DimensionError("training set needs matching, nonempty x and y");
  return {shape.pack_signals(xs), shape.pack_data(ys), static_cast<Index>(xs.size())};
}

double TrainReport::initial_loss() const {
  for (const auto& s : stages)
    if (!s.loss.empty()) return s.loss.front();
  return std::nan("");
}

double TrainReport::final_loss() const {
  for (auto it = stages.rbegin(); it != stages.rend(); ++it)
    if (!it->loss.empty()) return it->loss.back();
  return std::nan("");
}

namespace {

void run_loop(NetworkParams& params, const TrainSet& data, const TrainConfig& cfg, StageRecord& rec,
              Index depth) {
  std::vector<std::span<double>> pv;
  for (auto v : rec.variables) pv.push_back(values(params, v));
  AdamState state = make_adam(rec.rate, pv);
  rec.loss.reserve(static_cast<std::size_t>(cfg.max_iter));
  for (long t = 0; t < cfg.max_iter; ++t) {
    const ForwardTape tape = forward_tape(params, data.y, depth, cfg.exec);
    const double l = loss(tape.x.back(), data.x, data.n_elems);
    if (!std::isfinite(l)) {
      std::ostringstream msg;
      msg << "non-finite loss at layer stage " << depth << " (" << rec.kind << ", rate " << rec.rate
          << ") step " << t;
      throw NumericalAbort(msg.str());
    }
    rec.loss.push_back(l);
    const NetworkParams g = backprop(params, tape, data.x, cfg.exec, &rec.variables);
    std::vector<std::span<const double>> gv;
    for (auto v : rec.variables) gv.push_back(values(g, v));
    // Spans into params stay valid: the weights are never reallocated here.
    adam_step(state, pv, gv);
  }
}

}  // namespace

TrainReport train_layerwise(NetworkParams& params, const TrainSet& data, const TrainConfig& cfg,
                            const StageCallback& on_stage) {
  cfg.validate();
  params.validate();
  if (data.x.rows() != params.shape.signal_rows() || data.y.rows() != params.shape.data_rows) {
    throw DimensionError("training data does not match the network shape");
  }
  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  report.mode = params.mode;
  report.seed = cfg.seed;
  const std::vector<VarRef> everything = all_variables(params);

  auto run = [&](Index layer, std::string kind, double rate, std::vector<VarRef> vars) {
    StageRecord rec;
    rec.layer = layer;
    rec.kind = std::move(kind);
    rec.rate = rate;
    rec.variables = std::move(vars);
    run_loop(params, data, cfg, rec, layer);
    report.total_steps += static_cast<long>(rec.loss.size());
    if (on_stage) on_stage(rec);
    report.stages.push_back(std::move(rec));
  };

  for (Index i = 0; i <= params.layers; ++i) {
    auto vars = stage_variables(params, i);
    if (!vars.empty()) run(i, "layer", cfg.rate, std::move(vars));
    for (double f : cfg.refinements) run(i, "refine", cfg.rate * f, everything);
  }
  params.validate();
  report.final_lambda = params.lambda;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::pair<NetworkParams, TrainReport> train_layerwise(const TrainSet& data, const LinearModel& model,
                                                      const TrainConfig& cfg, const StageCallback& on_stage) {
  cfg.validate();
  NetworkParams params = init_params(model, cfg.gamma, cfg.lambda0, cfg.layers, cfg.mode);
  TrainReport report = train_layerwise(params, data, cfg, on_stage);
  return {std::move(params), std::move(report)};
}

}  // namespace bsr
