#pragma once

#include "bsr/linop.hpp"
#include "bsr/types.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace bsr {

inline constexpr double kDefaultLambda = 4e-3;

/// Default step: gamma = 1 / (sqrt(2) * L). With a unit-gain kernel this is the
/// 1/sqrt(2) used for the photothermal reconstructions.
double default_gamma(const LinearModel& model);

struct SolveTrace {
  /// Objective descended by the recursion, evaluated at every iterate
  /// (index 0 is the zero start). The threshold lambda is applied after a
  /// gradient step of length gamma, so the matching regularization weight is
  /// lambda / gamma.
  std::vector<double> objective;
  /// NMSE in dB against the ground truth, when one was supplied.
  std::vector<double> nmse_db;
  /// Wall time elapsed since the start of the solve.
  std::vector<double> seconds;
  double regularization_weight = 0.0;
  bool step_exceeds_bound = false;
  MMVSignal final_iterate;

  std::size_t size() const { return objective.size(); }
};

struct BistaResult {
  MMVSignal x;
  SolveTrace trace;
};

/// Block-ISTA from x_0 = 0:
///   x_i = eta_lambda(x_{i-1} - 2 gamma adjoint(apply(x_{i-1}) - t)).
/// A step above 1/L (L = lipschitz_bound) is reported on stderr and in the
/// trace but not rejected.
BistaResult bista_solve(const LinearModel& model, const MeasurementSet& t, double lambda, double gamma,
                        int n_iter, const std::optional<MMVSignal>& ground_truth = std::nullopt);

/// One iteration of the recursion above.
MMVSignal bista_step(const LinearModel& model, const MeasurementSet& t, const MMVSignal& x,
                     double lambda, double gamma);

/// CSV with header "iteration,objective,nmse_db,seconds".
void write_trace_csv(std::ostream& os, const SolveTrace& trace);

}  // namespace bsr
