#pragma once

#include "bsr/types.hpp"

#include <vector>

namespace bsr {

/// 10 log10(||truth - estimate||_F^2 / ||truth||_F^2). Returns -infinity for a
/// perfect estimate; throws if the truth is identically zero.
double nmse_db(const MMVSignal& estimate, const MMVSignal& truth);

/// NMSE_untied - NMSE_tied. Negative values mean untied learning helped.
double untied_gain(double nmse_untied, double nmse_tied);

/// Normal-approximation 95% interval: mean +/- 1.96 s / sqrt(n), where s is the
/// standard deviation with divisor n.
struct Interval {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};
Interval ci95(const std::vector<double>& samples);

struct NmseCurve {
  std::vector<Interval> points;  // one per iteration / layer
  std::size_t test_set_size = 0;
};

/// Per-position statistics over several per-instance curves of equal length.
NmseCurve nmse_curve(const std::vector<std::vector<double>>& per_instance);

/// Row sums over measurements, divided by the largest absolute row sum.
/// An all-zero input gives a zero vector.
Vector defect_estimate(const MMVSignal& x);

/// Negative entries set to zero, for turning signed profiles into masses.
Vector clamp_nonnegative(const Vector& v);

/// 1-Wasserstein distance between two nonnegative profiles on positions
/// 0..N-1 mapped to [0, 1], each normalized to unit mass. Result lies in [0, 1].
double wasserstein1(const Vector& u, const Vector& v);

}  // namespace bsr
