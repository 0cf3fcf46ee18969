#include "bsr/metrics.hpp"

#include <cmath>
#include <limits>

namespace bsr {

double nmse_db(const MMVSignal& estimate, const MMVSignal& truth) {
  require_shape(estimate, shape_of(truth), "nmse estimate");
  const double ref = truth.squaredNorm();
  if (ref == 0.0) throw std::domain_error("NMSE undefined for an all-zero ground truth");
  const double err = (truth - estimate).squaredNorm();
  if (err == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(err / ref);
}

double untied_gain(double nmse_untied, double nmse_tied) { return nmse_untied - nmse_tied; }

Interval ci95(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("ci95 needs at least two samples");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  // Divisor n: the two-sample set {0, 2} has s = 1 and half-width 1.96 / sqrt(2).
  const double sd = std::sqrt(ss / static_cast<double>(n));
  const double half = 1.96 * sd / std::sqrt(static_cast<double>(n));
  return {mean, mean - half, mean + half};
}

NmseCurve nmse_curve(const std::vector<std::vector<double>>& per_instance) {
  NmseCurve curve;
  curve.test_set_size = per_instance.size();
  if (per_instance.empty()) return curve;
  const std::size_t len = per_instance.front().size();
  for (const auto& c : per_instance) {
    if (c.size() != len) throw DimensionError("NMSE curves differ in length");
  }
  std::vector<double> column(per_instance.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < per_instance.size(); ++j) column[j] = per_instance[j][i];
    curve.points.push_back(ci95(column));
  }
  return curve;
}

Vector defect_estimate(const MMVSignal& x) {
  Vector sums = x.rowwise().sum();
  const double peak = sums.cwiseAbs().maxCoeff();
  if (peak == 0.0) return Vector::Zero(x.rows());
  return sums / peak;
}

Vector clamp_nonnegative(const Vector& v) { return v.cwiseMax(0.0); }

double wasserstein1(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionError("wasserstein1: length mismatch");
  if (u.size() == 0) throw std::invalid_argument("wasserstein1: empty profiles");
  if ((u.array() < 0.0).any() || (v.array() < 0.0).any()) {
    throw std::invalid_argument("wasserstein1: negative entries");
  }
  const double mu = u.sum(), mv = v.sum();
  if (mu == 0.0 || mv == 0.0) throw std::invalid_argument("wasserstein1: zero-mass profile");
  const Index n = u.size();
  if (n == 1) return 0.0;
  double cu = 0.0, cv = 0.0, dist = 0.0;
  // The CDF difference is constant on each gap between neighbouring positions.
  for (Index k = 0; k + 1 < n; ++k) {
    cu += u[k] / mu;
    cv += v[k] / mv;
    dist += std::abs(cu - cv);
  }
  return dist / static_cast<double>(n - 1);
}

}  // namespace bsr
