// Naive serial reference vs FFT path, serial and OpenMP-parallel over
// channels. Run with e.g. --benchmark_filter=Dct2d.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ffc/dct.hpp"
#include "ffc/ffc.hpp"
#include "ffc/tensor_io.hpp"

using namespace ffc;

namespace {

std::vector<double> random_values(std::size_t n) {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

constexpr TransformOptions kNaive{.impl = DctImpl::naive, .execution = Execution::serial};
constexpr TransformOptions kFftSerial{.impl = DctImpl::fft, .execution = Execution::serial};
constexpr TransformOptions kFftParallel{.impl = DctImpl::fft, .execution = Execution::parallel};

void Dct1d(benchmark::State& state, DctImpl impl) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_values(n);
  std::vector<double> y(n);
  const NaiveDct naive(impl == DctImpl::naive ? n : 1);
  const FftDct fast(n);
  std::vector<std::complex<double>> work(fast.workspace_size());
  for (auto _ : state) {
    if (impl == DctImpl::naive)
      naive.forward(x, y);
    else
      fast.forward(x, y, work);
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
  state.SetComplexityN(state.range(0));
}

void Dct2d(benchmark::State& state, TransformOptions opt) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto h = static_cast<std::size_t>(state.range(1));
  const FeatureGrid g(n, h, random_values(n * n * h));
  for (auto _ : state) {
    auto f = dct2d(g, opt);
    benchmark::DoNotOptimize(f.values().data());
  }
}

void Compress(benchmark::State& state, TransformOptions opt) {
  const auto h = static_cast<std::size_t>(state.range(1));
  const TokenSequence seq(576, h, random_values(576 * h));
  const FfcConfig cfg{.output_side = static_cast<std::size_t>(state.range(0)), .transform = opt};
  for (auto _ : state) {
    auto r = ffc_compress(seq, cfg);
    benchmark::DoNotOptimize(r.tokens.values().data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(Dct1d, naive, DctImpl::naive)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(Dct1d, fft, DctImpl::fft)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(Dct1d, fft_bluestein, DctImpl::fft)->Arg(24)->Arg(100)->Arg(1000);

BENCHMARK_CAPTURE(Dct2d, naive_serial, kNaive)->Args({24, 64})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(Dct2d, fft_serial, kFftSerial)->Args({24, 64})->Args({24, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(Dct2d, fft_parallel, kFftParallel)->Args({24, 64})->Args({24, 1024})->Unit(benchmark::kMillisecond);

BENCHMARK_CAPTURE(Compress, naive_serial, kNaive)->Args({12, 64})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(Compress, fft_serial, kFftSerial)->Args({12, 1024})->Args({6, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(Compress, fft_parallel, kFftParallel)->Args({12, 1024})->Args({6, 1024})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
