// Serial reference kernels against their OpenMP counterparts.
// Run with --benchmark_filter=... ; thread cap via BSR_THREADS.

#include "bsr/kernels.hpp"
#include "bsr/lbista.hpp"
#include "bsr/train.hpp"

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <random>

using namespace bsr;

namespace {

Matrix noise(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(g);
  return m;
}

std::vector<double> taps(Index n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = 1.0 / static_cast<double>(1 + std::abs(j - n / 2));
  return t;
}

template <bool Parallel>
void BM_conv_same(benchmark::State& st) {
  const Index cols = st.range(0);
  const Matrix in = noise(1280, cols, 1);
  Matrix out(1280, cols);
  const auto t = taps(121);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::conv_same(t, in, out);
    else kernels::serial::conv_same(t, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * 1280 * cols * 121);
}

template <bool Parallel>
void BM_tap_gradient(benchmark::State& st) {
  const Index cols = st.range(0);
  const Matrix in = noise(1280, cols, 2), up = noise(1280, cols, 3);
  std::vector<double> grad(121);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::conv_kernel_gradient(up, in, grad);
    else kernels::serial::conv_kernel_gradient(up, in, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}

template <bool Parallel>
void BM_block_threshold(benchmark::State& st) {
  const Index groups = st.range(0);
  const Matrix in = noise(1280, 150 * groups, 4);
  Matrix out(in.rows(), in.cols());
  const auto layout = kernels::BlockLayout::rows_of(1280, 150, groups);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::block_threshold(layout, in.data(), 1.0, out.data());
    else kernels::serial::block_threshold(layout, in.data(), 1.0, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

template <Exec E>
void BM_train_step(benchmark::State& st) {
  const auto model = LinearModel::conv({taps(61), 0.05}, 256, 30);
  const auto p = init_params(model, 0.5, 4e-3, 6, Mode::tied);
  const Index n_b = st.range(0);
  const Matrix y = noise(256, 30 * n_b, 5), x = noise(256, 30 * n_b, 6);
  for (auto _ : st) {
    const auto tape = forward_tape(p, y, 6, E);
    auto g = backprop(p, tape, x, E);
    benchmark::DoNotOptimize(g.lambda.data());
  }
}

}  // namespace

BENCHMARK(BM_conv_same<false>)->Arg(30)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conv_same<true>)->Arg(30)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tap_gradient<false>)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tap_gradient<true>)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_block_threshold<false>)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_block_threshold<true>)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_train_step<Exec::serial>)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_train_step<Exec::parallel>)->Arg(10)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  if (const char* t = std::getenv("BSR_THREADS")) kernels::set_max_threads(std::atoi(t));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
