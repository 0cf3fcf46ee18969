#include "bsr/datagen.hpp"
#include "bsr/ingest.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace bsr;
using namespace bsr::testing;

namespace {

ThermalSequence sequence_from_profile(const Matrix& profile, Index n_y, Gen* jitter = nullptr) {
  ThermalSequence s;
  for (Index t = 0; t < profile.cols(); ++t) {
    Matrix f(n_y, profile.rows());
    for (Index r = 0; r < n_y; ++r) f.row(r) = profile.col(t).transpose();
    if (jitter != nullptr) {
      // Zero-mean vertical perturbation leaves the vertical mean unchanged.
      const Matrix d = random_matrix(*jitter, n_y, profile.rows(), 0.1);
      f += d.rowwise() - d.colwise().mean();
    }
    s.frames.push_back(f);
  }
  return s;
}

}  // namespace

TEST(VerticalMean, SingleRowUnchanged) {
  Gen g(71);
  const Matrix prof = random_matrix(g, 9, 5);
  EXPECT_EQ(vertical_mean(sequence_from_profile(prof, 1)), prof);
}

TEST(VerticalMean, ConstantFrames) {
  ThermalSequence s;
  for (int t = 0; t < 4; ++t) s.frames.push_back(Matrix::Constant(3, 6, 2.5));
  EXPECT_EQ(vertical_mean(s), Matrix::Constant(6, 4, 2.5));
}

TEST(VerticalMean, MatchesDirectMean) {
  Gen g(72);
  ThermalSequence s;
  for (int t = 0; t < 5; ++t) s.frames.push_back(random_matrix(g, 7, 11));
  const Matrix m = vertical_mean(s);
  for (Index t = 0; t < 5; ++t)
    for (Index r = 0; r < 11; ++r) {
      double acc = 0.0;
      for (Index y = 0; y < 7; ++y) acc += s.frames[static_cast<std::size_t>(t)](y, r);
      EXPECT_NEAR(m(r, t), acc / 7.0, 1e-15);
    }
}

TEST(VerticalMean, Linear) {
  Gen g(73);
  ThermalSequence a, b, c;
  for (int t = 0; t < 3; ++t) {
    a.frames.push_back(random_matrix(g, 4, 6));
    b.frames.push_back(random_matrix(g, 4, 6));
    c.frames.push_back(2.0 * a.frames.back() - 3.0 * b.frames.back());
  }
  EXPECT_LT(rel_err(vertical_mean(c), 2.0 * vertical_mean(a) - 3.0 * vertical_mean(b)), 1e-14);
}

TEST(MaximumThermogram, SingleFramePassesThrough) {
  Gen g(74);
  const Matrix p = random_matrix(g, 8, 1);
  const auto mt = maximum_thermogram(p);
  EXPECT_EQ(mt.frame, 0);
  EXPECT_EQ(mt.values, Vector(p.col(0)));
}

TEST(MaximumThermogram, PulsePeakSelected) {
  // Background 20, a Gaussian spot whose amplitude rises to frame 7 and decays.
  const Index n_r = 40, n_t = 16;
  Matrix p(n_r, n_t);
  for (Index t = 0; t < n_t; ++t) {
    const double amp = t == 0 ? 0.0 : std::exp(-0.1 * (t - 7.0) * (t - 7.0));
    for (Index r = 0; r < n_r; ++r) p(r, t) = 20.0 + amp * std::exp(-0.02 * (r - 20.0) * (r - 20.0));
  }
  const auto mt = maximum_thermogram(p);
  EXPECT_EQ(mt.frame, 7);
  EXPECT_LT(rel_err(mt.values, Vector(p.col(7).array() - 20.0)), 1e-15);
}

TEST(MaximumThermogram, MonotoneDecayPicksFirstFrame) {
  Matrix p(5, 6);
  for (Index t = 0; t < 6; ++t) p.col(t).setConstant(10.0 * std::exp(-0.3 * t));
  EXPECT_EQ(maximum_thermogram(p).frame, 1);
}

TEST(MaximumThermogram, TiesGoToEarliest) {
  Matrix p = Matrix::Zero(3, 5);
  p.col(2).setConstant(1.0);
  p.col(4).setConstant(1.0);
  EXPECT_EQ(maximum_thermogram(p).frame, 2);
}

TEST(MaximumThermogram, OutputIsABackgroundSubtractedColumn) {
  Gen g(75);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix p = random_matrix(g, 6, 2 + static_cast<Index>(g() % 8));
    const auto mt = maximum_thermogram(p);
    EXPECT_EQ(mt.values, Vector(p.col(mt.frame) - p.col(0)));
  }
}

TEST(MaximumThermogram, CustomSelector) {
  Gen g(76);
  const Matrix p = random_matrix(g, 6, 5);
  const auto mt = maximum_thermogram(p, [](const Matrix&) { return Index{3}; });
  EXPECT_EQ(mt.frame, 3);
}

TEST(Assemble, StacksAndRejectsRagged) {
  const MeasurementSet y = assemble_measurements({Vector::Constant(4, 1.0), Vector::Constant(4, 2.0)});
  EXPECT_EQ(shape_of(y), (Shape{4, 2}));
  EXPECT_EQ(y(3, 1), 2.0);
  EXPECT_THROW(assemble_measurements({Vector::Zero(4), Vector::Zero(5)}), DimensionError);
}

TEST(Pipeline, SynthesizedSequencesReproduceData) {
  ThermalCaseConfig c;
  c.n_r = 80;
  c.n_meas = 6;
  c.n_train = 1;
  c.n_test = 0;
  c.defect_pnz = 0.03;
  c.illum_pnz = 0.05;
  const auto prob = gen_thermal_problem(c);
  const Matrix& y = prob.train.y[0];
  Gen g(77);
  std::vector<Vector> reduced;
  for (Index m = 0; m < c.n_meas; ++m) {
    // Ambient 21 degrees plus a uniform unit rise on top of the data, following a
    // pulse shape that peaks at frame 5. The uniform part keeps the mean rise positive
    // for measurements whose data is pure noise.
    Matrix prof(c.n_r, 12);
    for (Index t = 0; t < 12; ++t) {
      const double s = t == 0 ? 0.0 : std::exp(-0.2 * (t - 5.0) * (t - 5.0));
      prof.col(t) = Vector::Constant(c.n_r, 21.0) + s * (y.col(m).array() + 1.0).matrix();
    }
    const auto seq = sequence_from_profile(prof, 5, &g);
    const auto mt = maximum_thermogram(vertical_mean(seq));
    EXPECT_EQ(mt.frame, 5);
    reduced.push_back(mt.values.array() - 1.0);
  }
  const MeasurementSet rebuilt = assemble_measurements(reduced);
  EXPECT_LT((rebuilt - y).norm(), 1e-12 * std::max(1.0, y.norm()));
}

TEST(Sequence, FileRoundTrip) {
  Gen g(78);
  ThermalSequence s;
  for (int t = 0; t < 3; ++t) s.frames.push_back(random_matrix(g, 2, 5));
  const auto path = std::filesystem::temp_directory_path() / "bsr_seq_roundtrip.bsr";
  save_sequence(path, s);
  const auto back = load_sequence(path);
  ASSERT_EQ(back.n_t(), 3);
  for (int t = 0; t < 3; ++t) EXPECT_EQ(back.frames[t], s.frames[t]);
  std::filesystem::remove(path);
}
