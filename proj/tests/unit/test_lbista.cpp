#include "bsr/bista.hpp"
#include "bsr/lbista.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace bsr;
using namespace bsr::testing;

namespace {

LinearModel random_model(Gen& g, bool conv, Index n_r, Index n_meas) {
  if (conv) return LinearModel::conv({random_taps(g, random_odd(g, 1, 11)), 1.0}, n_r, n_meas);
  return LinearModel::dense({random_matrix(g, 2 * n_r, n_r * n_meas, 0.4), n_r, n_meas});
}

Matrix draw_data(Gen& g, const LinearModel& m) {
  return random_matrix(g, m.data_shape().rows, m.data_shape().cols);
}

}  // namespace

TEST(Init, IdentityKernelPerfectPreconditioner) {
  const auto m = LinearModel::conv({{1.0}, 1.0}, 5, 2);
  const auto p = init_params(m, 0.5, 4e-3, 3, Mode::tied);
  const auto& b = std::get<ConvWeight>(p.B[0]);
  const auto& s = std::get<ConvWeight>(p.S[0]);
  EXPECT_EQ(b.taps, std::vector<double>{1.0});
  EXPECT_EQ(s.taps, std::vector<double>{0.0});
  EXPECT_TRUE(s.boundary.empty());
  EXPECT_EQ(p.lambda, std::vector<double>(3, 4e-3));
}

TEST(Init, DenseIdentity) {
  const auto m = LinearModel::dense({Matrix::Identity(6, 6), 3, 2});
  const auto p = init_params(m, 0.5, 0.1, 2, Mode::untied);
  ASSERT_EQ(p.B.size(), 2u);
  EXPECT_EQ(std::get<Matrix>(p.B[1]), Matrix::Identity(6, 6));
  EXPECT_TRUE(std::get<Matrix>(p.S[1]).isZero(0.0));
}

TEST(Init, ComposedOperatorMatchesOracle) {
  Gen g(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n_r = 1 + static_cast<Index>(g() % 25);
    const auto taps = random_taps(g, random_odd(g, 1, 13));
    const auto m = LinearModel::conv({taps, 1.0}, n_r, 3);
    const double gamma = 0.3;
    const auto p = init_params(m, gamma, 0.0, 1, Mode::tied);
    const Matrix phi = conv_matrix_oracle(taps, n_r);
    const Matrix x = random_matrix(g, n_r, 3);
    const Matrix expect = x - 2 * gamma * phi.transpose() * (phi * x);
    EXPECT_LT(rel_err(weight_apply(p.S[0], x), expect), 1e-12) << trial;
    EXPECT_LT(rel_err(weight_matrix(p.B[0], n_r), 2 * gamma * phi.transpose()), 1e-14) << trial;
    ASSERT_EQ(std::get<ConvWeight>(p.S[0]).taps.size(), 2 * taps.size() - 1);
  }
}

TEST(Init, Validation) {
  const auto m = LinearModel::conv({{1.0}, 1.0}, 5, 2);
  EXPECT_THROW(init_params(m, 0.5, 0.1, 0, Mode::tied), ConfigError);
  EXPECT_THROW(init_params(m, -0.5, 0.1, 2, Mode::tied), ConfigError);
}

TEST(Forward, ZeroInputFixedPoint) {
  Gen g(42);
  for (bool conv : {true, false}) {
    const auto m = random_model(g, conv, 8, 3);
    for (Mode mode : {Mode::tied, Mode::untied}) {
      const auto p = init_params(m, 0.5 / lipschitz_bound(m), 0.1, 4, mode);
      const Matrix zero = Matrix::Zero(m.data_shape().rows, m.data_shape().cols);
      for (Index d = 0; d <= 4; ++d) EXPECT_TRUE(forward(p, zero, d).isZero(0.0));
    }
  }
}

TEST(Forward, TiedExactInverse) {
  Gen g(43);
  const auto m = LinearModel::conv({{1.0}, 1.0}, 9, 4);
  const auto p = init_params(m, 0.5, 0.0, 5, Mode::tied);
  const Matrix y = random_matrix(g, 9, 4);
  for (Index d = 1; d <= 5; ++d) EXPECT_LT(rel_err(forward(p, y, d), y), 1e-16);
  // Depth 0 exposes the pre-threshold B y.
  EXPECT_LT(rel_err(forward(p, y, 0), y), 1e-16);
}

TEST(Forward, UntrainedNetworkEqualsBista) {
  Gen g(44);
  std::uniform_real_distribution<double> ul(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const bool conv = trial % 2 == 0;
    const auto m = random_model(g, conv, 16, 4);
    const double gamma = 1.0 / (std::sqrt(2.0) * lipschitz_bound(m));
    const double lam = ul(g);
    const Matrix y = draw_data(g, m);
    const auto untied = init_params(m, gamma, lam, 8, Mode::untied);
    const auto tied = init_params(m, gamma, lam, 8, Mode::tied);
    for (Index d = 1; d <= 8; ++d) {
      const Matrix ref = bista_solve(m, y, lam, gamma, static_cast<int>(d)).x;
      EXPECT_LT(rel_err(forward(untied, y, d), ref), 1e-10) << trial << " d=" << d;
      EXPECT_LT(rel_err(forward(tied, y, d), forward(untied, y, d)), 1e-12) << trial << " d=" << d;
    }
  }
}

TEST(Forward, ColumnPermutationEquivariance) {
  Gen g(45);
  const auto m = random_model(g, true, 20, 5);
  auto p = init_params(m, 0.5 / lipschitz_bound(m), 0.2, 4, Mode::untied);
  const Matrix y = random_matrix(g, 20, 5);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 3, 0, 4, 1, 2;
  EXPECT_LT(rel_err(forward(p, y * perm), forward(p, y) * perm), 1e-14);
}

TEST(Forward, SerialAndParallelAgree) {
  Gen g(46);
  const auto m = random_model(g, true, 30, 6);
  const auto p = init_params(m, 0.5 / lipschitz_bound(m), 0.1, 5, Mode::tied);
  std::vector<Matrix> ys;
  for (int i = 0; i < 7; ++i) ys.push_back(random_matrix(g, 30, 6));
  const Matrix packed = p.shape.pack_data(ys);
  const Matrix a = forward_batch(p, packed, 5, Exec::serial);
  const Matrix b = forward_batch(p, packed, 5, Exec::parallel);
  EXPECT_EQ(a, b);
  // Batched evaluation equals per-element evaluation.
  for (Index e = 0; e < 7; ++e) EXPECT_LT(rel_err(p.shape.unpack_signal(a, e), forward(p, ys[e])), 1e-14);
}

TEST(Batch, PackRoundTrip) {
  Gen g(47);
  const auto dense = random_model(g, false, 4, 3);
  const auto s = BatchShape::of(dense);
  EXPECT_EQ(s.signal_rows(), 12);
  std::vector<Matrix> xs{random_matrix(g, 4, 3), random_matrix(g, 4, 3)};
  const Matrix packed = s.pack_signals(xs);
  EXPECT_EQ(packed.rows(), 12);
  EXPECT_EQ(packed.cols(), 2);
  EXPECT_EQ(Vector(packed.col(1)), rowmajor(xs[1]));
  EXPECT_EQ(s.unpack_signals(packed), xs);
}

TEST(Mode, Names) {
  EXPECT_EQ(mode_from_string("tied"), Mode::tied);
  EXPECT_EQ(to_string(Mode::untied), "untied");
  EXPECT_THROW(mode_from_string("loose"), ConfigError);
}
