#include "bsr/bista.hpp"
#include "bsr/blocksparse.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bsr;
using namespace bsr::testing;

namespace {

LinearModel random_model(Gen& g, bool conv, Index n_r, Index n_meas) {
  if (conv) return LinearModel::conv({random_taps(g, random_odd(g, 3, 9)), 1.0}, n_r, n_meas);
  return LinearModel::dense({random_matrix(g, n_r * n_meas / 2 + 1, n_r * n_meas, 0.5), n_r, n_meas});
}

}  // namespace

TEST(Bista, ZeroDataStaysZero) {
  const auto m = LinearModel::conv({{0.2, 0.6, 0.2}, 1.0}, 10, 3);
  const auto r = bista_solve(m, Matrix::Zero(10, 3), 0.01, 0.5, 25);
  EXPECT_TRUE(r.x.isZero(0.0));
  EXPECT_EQ(r.trace.size(), 26u);
}

TEST(Bista, IdentityKernelOneStep) {
  Gen g(31);
  const auto m = LinearModel::conv({{1.0}, 1.0}, 6, 2);
  const Matrix t = random_matrix(g, 6, 2);
  // x_1 = 0 + 2 * (1/2) * (t - 0) = t
  EXPECT_LT(rel_err(bista_solve(m, t, 0.0, 0.5, 1).x, t), 1e-16);
  EXPECT_LT(rel_err(bista_solve(m, t, 0.0, 0.5, 7).x, t), 1e-16);
}

TEST(Bista, LeastSquaresLimit) {
  Gen g(32);
  for (int trial = 0; trial < 5; ++trial) {
    // Well-conditioned overdetermined dense system.
    const Index n_r = 6, n_meas = 2;
    Matrix a = random_matrix(g, 24, n_r * n_meas, 0.3);
    a.topRows(12) += Matrix::Identity(12, 12);
    const auto m = LinearModel::dense({a, n_r, n_meas});
    const Matrix t = random_matrix(g, 24, 1);
    const Vector ls = a.colPivHouseholderQr().solve(t.col(0));
    const auto r = bista_solve(m, t, 0.0, 1.0 / (2.0 * lipschitz_bound(m)), 3000);
    EXPECT_LT(rel_err(rowmajor(r.x), ls), 1e-6) << trial;
  }
}

TEST(Bista, ObjectiveNonincreasing) {
  Gen g(33);
  std::uniform_real_distribution<double> ul(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_model(g, trial % 2 == 0, 16, 4);
    const Matrix x = block_soft_threshold(random_matrix(g, 16, 4), 1.5);
    const Matrix t = apply(m, x) + 0.05 * random_matrix(g, m.data_shape().rows, m.data_shape().cols);
    const double gamma = 1.0 / (2.0 * lipschitz_bound(m));
    const auto r = bista_solve(m, t, ul(g) * gamma, gamma, 100);
    EXPECT_FALSE(r.trace.step_exceeds_bound);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_LE(r.trace.objective[i], r.trace.objective[i - 1] + 1e-10) << trial << " @" << i;
    }
    // The trace value is the objective with weight lambda / gamma.
    EXPECT_NEAR(r.trace.objective.back(),
                objective(m, r.x, t, r.trace.regularization_weight), 1e-12 * r.trace.objective.back());
  }
}

TEST(Bista, FixedPointIsStationary) {
  Gen g(34);
  const auto m = random_model(g, true, 20, 3);
  const Matrix t = random_matrix(g, 20, 3);
  const double gamma = 1.0 / (2.0 * lipschitz_bound(m));
  const Matrix xs = bista_solve(m, t, 0.05, gamma, 20000).x;
  const Matrix next = bista_step(m, t, xs, 0.05, gamma);
  EXPECT_LT((next - xs).norm(), 1e-12 * std::max(1.0, xs.norm()));
}

TEST(Bista, StepMatchesRecursion) {
  Gen g(35);
  const auto m = random_model(g, false, 5, 3);
  const Matrix t = random_matrix(g, m.data_shape().rows, 1);
  const Matrix x = random_matrix(g, 5, 3);
  const Matrix a = materialize_dense(m);
  const Vector grad = a.transpose() * (a * rowmajor(x) - t.col(0));
  const Matrix pre = from_rowmajor(rowmajor(x) - 2 * 0.1 * grad, 5, 3);
  EXPECT_LT(rel_err(bista_step(m, t, x, 0.2, 0.1), block_soft_threshold(pre, 0.2)), 1e-13);
}

TEST(Bista, TraceWithGroundTruth) {
  Gen g(36);
  const auto m = random_model(g, true, 12, 2);
  const Matrix x = random_matrix(g, 12, 2);
  const auto r = bista_solve(m, apply(m, x), 0.0, 0.2 / lipschitz_bound(m), 10, x);
  ASSERT_EQ(r.trace.nmse_db.size(), 11u);
  EXPECT_EQ(r.trace.nmse_db[0], 0.0);  // zero start
  std::ostringstream os;
  write_trace_csv(os, r.trace);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "iteration,objective,nmse_db,seconds");
}

TEST(Bista, Validation) {
  const auto m = LinearModel::conv({{1.0}, 1.0}, 3, 1);
  EXPECT_THROW(bista_solve(m, Matrix::Zero(3, 1), 0.1, 0.5, 0), ConfigError);
  EXPECT_THROW(bista_solve(m, Matrix::Zero(4, 1), 0.1, 0.5, 3), DimensionError);
  // Steps beyond 1/L are flagged, not rejected.
  EXPECT_TRUE(bista_solve(m, Matrix::Zero(3, 1), 0.1, 2.0, 2).trace.step_exceeds_bound);
}

TEST(Bista, DefaultGamma) {
  const auto m = LinearModel::conv({{1.0}, 1.0}, 8, 1);
  EXPECT_NEAR(default_gamma(m), 1.0 / std::sqrt(2.0), 1e-15);
}
