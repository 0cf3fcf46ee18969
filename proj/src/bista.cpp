#include "bsr/bista.hpp"

#include "bsr/blocksparse.hpp"
#include "bsr/metrics.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <ostream>

namespace bsr {

double default_gamma(const LinearModel& model) {
  return 1.0 / (std::sqrt(2.0) * lipschitz_bound(model));
}

MMVSignal bista_step(const LinearModel& model, const MeasurementSet& t, const MMVSignal& x,
                     double lambda, double gamma) {
  const MMVSignal grad = adjoint(model, apply(model, x) - t);
  return block_soft_threshold(x - 2.0 * gamma * grad, lambda);
}

BistaResult bista_solve(const LinearModel& model, const MeasurementSet& t, double lambda, double gamma,
                        int n_iter, const std::optional<MMVSignal>& ground_truth) {
  if (n_iter < 1) throw ConfigError("n_iter must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
  require_shape(t, model.data_shape(), "bista data");
  if (ground_truth) require_shape(*ground_truth, model.signal_shape(), "bista ground truth");

  BistaResult r;
  SolveTrace& tr = r.trace;
  tr.regularization_weight = lambda / gamma;
  if (gamma > 1.0 / lipschitz_bound(model)) {
    tr.step_exceeds_bound = true;
    std::cerr << "warning: gamma = " << gamma << " exceeds 1/L = " << 1.0 / lipschitz_bound(model)
              << "\n";
  }

  const auto start = std::chrono::steady_clock::now();
  auto record = [&](const MMVSignal& x) {
    tr.objective.push_back(objective(model, x, t, tr.regularization_weight));
    if (ground_truth) tr.nmse_db.push_back(nmse_db(x, *ground_truth));
    tr.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };

  r.x = MMVSignal::Zero(model.signal_shape().rows, model.signal_shape().cols);
  record(r.x);
  for (int i = 1; i <= n_iter; ++i) {
    r.x = bista_step(model, t, r.x, lambda, gamma);
    record(r.x);
  }
  tr.final_iterate = r.x;
  return r;
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
  os << "iteration,objective,nmse_db,seconds\n";
  os.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i << ',' << trace.objective[i] << ',';
    if (i < trace.nmse_db.size()) {
      const double v = trace.nmse_db[i];
      if (std::isinf(v)) os << (v < 0 ? "-inf" : "inf");
      else os << v;
    }
    os << ',' << trace.seconds[i] << '\n';
  }
}

}  // namespace bsr
