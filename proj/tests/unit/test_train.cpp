#include "bsr/datagen.hpp"
#include "bsr/train.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace bsr;
using namespace bsr::testing;

namespace {

double eval_loss(const NetworkParams& p, const TrainSet& d, Index depth) {
  return loss(forward_batch(p, d.y, depth, Exec::serial), d.x, d.n_elems);
}

struct Instance {
  LinearModel model;
  NetworkParams params;
  TrainSet data;
};

// Random network around the analytic initialization so that no weight is special.
Instance random_instance(Gen& g, bool conv, Mode mode, Index layers) {
  LinearModel m = conv ? LinearModel::conv({random_taps(g, 5), 1.0}, 12, 3)
                       : LinearModel::dense({random_matrix(g, 6, 8, 0.5), 4, 2});
  NetworkParams p = init_params(m, 0.5 / lipschitz_bound(m), 0.0, layers, mode);
  for (auto* ws : {&p.B, &p.S}) {
    for (auto& w : *ws) {
      for (double& v : trainable_values(w)) v += 0.05 * random_matrix(g, 1, 1)(0, 0);
    }
  }
  std::uniform_real_distribution<double> ul(0.05, 0.6);
  for (double& l : p.lambda) l = ul(g);
  std::vector<Matrix> xs, ys;
  for (int e = 0; e < 3; ++e) {
    Matrix x = random_matrix(g, m.signal_shape().rows, m.signal_shape().cols);
    for (Index k = 0; k < x.rows(); ++k)
      if (g() % 3 == 0) x.row(k).setZero();
    ys.push_back(apply(m, x) + 0.1 * random_matrix(g, m.data_shape().rows, m.data_shape().cols));
    xs.push_back(std::move(x));
  }
  return {m, p, TrainSet::pack(p.shape, xs, ys)};
}

// Smallest distance between a block norm at a threshold input and that layer's threshold.
double boundary_margin(const NetworkParams& p, const ForwardTape& t) {
  double margin = INFINITY;
  const auto layout = p.shape.layout(t.n_elems);
  std::vector<double> norms(static_cast<std::size_t>(layout.n_blocks * layout.n_groups));
  for (Index i = 1; i <= t.depth; ++i) {
    kernels::serial::block_norms(layout, t.z[i].data(), norms.data());
    for (double n : norms) margin = std::min(margin, std::abs(n - p.lambda[i - 1]));
  }
  return margin;
}

void check_gradients(Gen& g, bool conv, Mode mode) {
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = random_instance(g, conv, mode, 3);
    const Index depth = 3;
    const ForwardTape tape = forward_tape(inst.params, inst.data.y, depth, Exec::serial);
    if (boundary_margin(inst.params, tape) < 1e-3) continue;
    ++checked;
    const NetworkParams grad = backprop(inst.params, tape, inst.data.x, Exec::serial);
    for (const VarRef v : all_variables(inst.params)) {
      auto vals = values(inst.params, v);
      const auto an = values(grad, v);
      Vector fd(static_cast<Index>(vals.size())), ga(static_cast<Index>(vals.size()));
      for (std::size_t i = 0; i < vals.size(); ++i) {
        const double keep = vals[i];
        vals[i] = keep + h;
        const double fp = eval_loss(inst.params, inst.data, depth);
        vals[i] = keep - h;
        const double fm = eval_loss(inst.params, inst.data, depth);
        vals[i] = keep;
        fd[static_cast<Index>(i)] = (fp - fm) / (2 * h);
        ga[static_cast<Index>(i)] = an[i];
      }
      const double err = (ga - fd).norm() / std::max(fd.norm(), 1e-8);
      EXPECT_LT(err, 1e-4) << to_string(v) << " conv=" << conv << " trial=" << trial;
    }
  }
  EXPECT_GT(checked, 6);
}

std::vector<std::span<double>> spans(std::vector<std::vector<double>>& vs) {
  std::vector<std::span<double>> out;
  for (auto& v : vs) out.emplace_back(v);
  return out;
}

std::vector<std::span<const double>> cspans(const std::vector<std::vector<double>>& vs) {
  std::vector<std::span<const double>> out;
  for (const auto& v : vs) out.emplace_back(v);
  return out;
}

}  // namespace

TEST(Loss, Examples) {
  Gen g(51);
  const Matrix x = random_matrix(g, 4, 6);
  EXPECT_EQ(loss(x, x, 2), 0.0);
  Matrix a(2, 1), b = Matrix::Zero(2, 1);
  a << 1, 1;
  EXPECT_EQ(loss(a, b, 1), 1.0);
  const Matrix y = random_matrix(g, 4, 6);
  double s = 0.0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 6; ++j) s += 0.5 * (x(i, j) - y(i, j)) * (x(i, j) - y(i, j));
  EXPECT_NEAR(loss(x, y, 3), s / 3.0, 1e-14);
}

TEST(Backprop, ConvTied) {
  Gen g(52);
  check_gradients(g, true, Mode::tied);
}

TEST(Backprop, ConvUntied) {
  Gen g(53);
  check_gradients(g, true, Mode::untied);
}

TEST(Backprop, DenseTied) {
  Gen g(54);
  check_gradients(g, false, Mode::tied);
}

TEST(Backprop, DenseUntied) {
  Gen g(55);
  check_gradients(g, false, Mode::untied);
}

TEST(Backprop, DeadNetworkHasNoThresholdGradient) {
  Gen g(56);
  for (Mode mode : {Mode::tied, Mode::untied}) {
    auto inst = random_instance(g, true, mode, 3);
    for (double& l : inst.params.lambda) l = 1e6;
    const auto tape = forward_tape(inst.params, inst.data.y, 3);
    const auto grad = backprop(inst.params, tape, inst.data.x);
    for (Index i = 0; i < 3; ++i) EXPECT_EQ(grad.lambda[static_cast<std::size_t>(i)], 0.0);
  }
}

TEST(Backprop, SingleLayerLeastSquares) {
  Gen g(57);
  const auto m = LinearModel::conv({{0.0, 1.0, 0.0}, 1.0}, 10, 2);
  auto p = init_params(m, 0.5, 0.0, 1, Mode::untied);
  auto& b = std::get<ConvWeight>(p.B[0]);
  b.taps = random_taps(g, 3);
  std::vector<Matrix> xs{random_matrix(g, 10, 2), random_matrix(g, 10, 2)};
  std::vector<Matrix> ys{random_matrix(g, 10, 2), random_matrix(g, 10, 2)};
  const auto data = TrainSet::pack(p.shape, xs, ys);
  const auto grad = backprop(p, forward_tape(p, data.y, 1), data.x);
  // d/d b_j of 1/2 mean_e ||conv(b, y_e) - x_e||^2 = mean_e <r_e, shift_j(y_e)>
  std::vector<double> expect(3, 0.0);
  for (std::size_t e = 0; e < 2; ++e) {
    const Matrix r = conv_matrix_oracle(b.taps, 10) * ys[e] - xs[e];
    for (Index j = 0; j < 3; ++j) {
      Matrix shifted = Matrix::Zero(10, 2);
      for (Index k = 0; k < 10; ++k)
        if (k + 1 - j >= 0 && k + 1 - j < 10) shifted.row(k) = ys[e].row(k + 1 - j);
      expect[static_cast<std::size_t>(j)] += 0.5 * (r.array() * shifted.array()).sum();
    }
  }
  const auto& gb = std::get<ConvWeight>(grad.B[0]).taps;
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(gb[j], expect[j], 1e-12);
}

TEST(Backprop, RestrictedVariablesMatchFull) {
  Gen g(58);
  auto inst = random_instance(g, true, Mode::untied, 4);
  const auto tape = forward_tape(inst.params, inst.data.y, 4);
  const auto full = backprop(inst.params, tape, inst.data.x);
  const auto vars = stage_variables(inst.params, 3);
  const auto part = backprop(inst.params, tape, inst.data.x, Exec::parallel, &vars);
  for (const VarRef v : all_variables(inst.params)) {
    const auto a = values(full, v), b = values(part, v);
    const bool wanted = std::find(vars.begin(), vars.end(), v) != vars.end();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i], wanted ? a[i] : 0.0) << to_string(v);
  }
}

TEST(Backprop, SerialParallelBitIdentical) {
  Gen g(59);
  for (Mode mode : {Mode::tied, Mode::untied}) {
    auto inst = random_instance(g, true, mode, 3);
    const auto ts = forward_tape(inst.params, inst.data.y, 3, Exec::serial);
    const auto tp = forward_tape(inst.params, inst.data.y, 3, Exec::parallel);
    const auto gs = backprop(inst.params, ts, inst.data.x, Exec::serial);
    const auto gp = backprop(inst.params, tp, inst.data.x, Exec::parallel);
    for (const VarRef v : all_variables(inst.params)) {
      const auto a = values(gs, v), b = values(gp, v);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << to_string(v);
    }
  }
}

TEST(Adam, ZeroGradientLeavesParams) {
  std::vector<std::vector<double>> p{{1.0, -2.0}, {3.0}}, gr{{0.0, 0.0}, {0.0}};
  auto st = make_adam(1e-3, spans(p));
  adam_step(st, spans(p), cspans(gr));
  EXPECT_EQ(st.t, 1);
  EXPECT_EQ(p[0], (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(p[1], std::vector<double>{3.0});
}

TEST(Adam, FirstStepMovesByRate) {
  std::vector<std::vector<double>> p{{1.0, 1.0}}, gr{{0.3, -40.0}};
  auto st = make_adam(1e-3, spans(p));
  adam_step(st, spans(p), cspans(gr));
  // m_hat = g, v_hat = g^2: update = lr * g / (|g| + eps)
  EXPECT_NEAR(p[0][0], 1.0 - 1e-3 * 0.3 / (0.3 + 1e-8), 1e-16);
  EXPECT_NEAR(p[0][1], 1.0 + 1e-3 * 40.0 / (40.0 + 1e-8), 1e-16);
}

TEST(Adam, TwoStepsHandRecursion) {
  std::vector<std::vector<double>> p{{0.5}}, gr{{2.0}};
  auto st = make_adam(0.01, spans(p));
  adam_step(st, spans(p), cspans(gr));
  gr[0][0] = -1.0;
  adam_step(st, spans(p), cspans(gr));
  const double m1 = 0.1 * 2.0, v1 = 0.001 * 4.0;
  const double x1 = 0.5 - 0.01 * (m1 / 0.1) / (std::sqrt(v1 / 0.001) + 1e-8);
  const double m2 = 0.9 * m1 + 0.1 * -1.0, v2 = 0.999 * v1 + 0.001 * 1.0;
  const double mh = m2 / (1 - 0.81), vh = v2 / (1 - 0.999 * 0.999);
  const double x2 = x1 - 0.01 * mh / (std::sqrt(vh) + 1e-8);
  EXPECT_NEAR(p[0][0], x2, 1e-15);
  EXPECT_NEAR(st.m[0][0], m2, 1e-16);
  EXPECT_NEAR(st.v[0][0], v2, 1e-16);
}

TEST(Schedule, SingleStepAccounting) {
  Gen g(60);
  auto inst = random_instance(g, true, Mode::tied, 1);
  const NetworkParams before = inst.params;
  TrainConfig cfg;
  cfg.layers = 1;
  cfg.max_iter = 1;
  cfg.refinements = {};
  const auto report = train_layerwise(inst.params, inst.data, cfg);
  EXPECT_EQ(report.total_steps, 1);
  ASSERT_EQ(report.stages.size(), 1u);
  EXPECT_EQ(report.stages[0].variables, (std::vector<VarRef>{{VarKind::lambda, 0}}));
  EXPECT_NE(inst.params.lambda[0], before.lambda[0]);
  EXPECT_EQ(std::get<ConvWeight>(inst.params.S[0]).taps, std::get<ConvWeight>(before.S[0]).taps);
  EXPECT_EQ(std::get<ConvWeight>(inst.params.B[0]).taps, std::get<ConvWeight>(before.B[0]).taps);
}

TEST(Schedule, StageCountsWithRefinements) {
  Gen g(61);
  for (Mode mode : {Mode::tied, Mode::untied}) {
    auto inst = random_instance(g, false, mode, 2);
    TrainConfig cfg;
    cfg.mode = mode;
    cfg.layers = 2;
    cfg.max_iter = 3;
    cfg.refinements = {0.5, 0.1};
    const auto report = train_layerwise(inst.params, inst.data, cfg);
    // Stage 0 has no own variables: 2 refinements. Stages 1, 2: 1 + 2 loops.
    EXPECT_EQ(report.stages.size(), 8u);
    EXPECT_EQ(report.total_steps, 24);
    EXPECT_EQ(report.stages.back().kind, "refine");
    EXPECT_DOUBLE_EQ(report.stages.back().rate, cfg.rate * 0.1);
    EXPECT_EQ(report.stages.back().variables, all_variables(inst.params));
  }
}

TEST(Schedule, StageVariables) {
  const auto m = LinearModel::conv({{0.2, 0.6, 0.2}, 1.0}, 8, 2);
  const auto tied = init_params(m, 0.5, 0.1, 3, Mode::tied);
  const auto untied = init_params(m, 0.5, 0.1, 3, Mode::untied);
  EXPECT_TRUE(stage_variables(tied, 0).empty());
  EXPECT_TRUE(stage_variables(untied, 0).empty());
  EXPECT_EQ(stage_variables(tied, 2), (std::vector<VarRef>{{VarKind::lambda, 1}}));
  const auto u = stage_variables(untied, 2);
  EXPECT_EQ(u.size(), 3u);
  EXPECT_NE(std::find(u.begin(), u.end(), VarRef{VarKind::S, 1}), u.end());
  EXPECT_NE(std::find(u.begin(), u.end(), VarRef{VarKind::B, 1}), u.end());
  EXPECT_EQ(all_variables(tied).size(), 5u);
  EXPECT_EQ(all_variables(untied).size(), 9u);
}

TEST(Train, ThermalDeskRunReducesLossDeterministically) {
  ThermalCaseConfig dc;
  dc.n_r = 96;
  dc.n_meas = 8;
  dc.n_train = 8;
  dc.n_test = 0;
  dc.defect_pnz = 0.03;
  dc.illum_pnz = 0.05;
  dc.seed = 3;
  const auto prob = gen_thermal_problem(dc);
  const auto data = TrainSet::pack(BatchShape::of(prob.model), prob.train.x, prob.train.y);
  TrainConfig cfg;  // rates, refinements, K, gamma, lambda0 from the reference configuration
  cfg.max_iter = 15;
  auto [p1, r1] = train_layerwise(data, prob.model, cfg);
  EXPECT_LT(r1.final_loss(), r1.initial_loss());
  cfg.exec = Exec::serial;
  auto [p2, r2] = train_layerwise(data, prob.model, cfg);
  ASSERT_EQ(r1.stages.size(), r2.stages.size());
  for (std::size_t s = 0; s < r1.stages.size(); ++s) EXPECT_EQ(r1.stages[s].loss, r2.stages[s].loss);
  EXPECT_EQ(p1.lambda, p2.lambda);
}

TEST(Train, NonFiniteLossAborts) {
  Gen g(62);
  auto inst = random_instance(g, true, Mode::tied, 1);
  inst.data.x(0, 0) = NAN;
  TrainConfig cfg;
  cfg.layers = 1;
  cfg.max_iter = 2;
  EXPECT_THROW(train_layerwise(inst.params, inst.data, cfg), NumericalAbort);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  c.rate = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.refinements = {1.5};
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}
