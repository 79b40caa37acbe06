// Serial reference vs OpenMP kernels on pipeline-sized inputs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "emgdrift/kernels.hpp"

namespace k = emgdrift::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

// 2 kHz x 14 channels, 200 ms / 20 ms windows; arg = seconds of signal.
template <auto Kernel>
void rms_frames(benchmark::State& state) {
  const std::size_t channels = 14, window = 400, stride = 40;
  const auto samples = static_cast<std::size_t>(state.range(0)) * 2000;
  const auto signal = random_values(samples * channels, 1);
  std::vector<double> out(((samples - window) / stride + 1) * channels);
  for (auto _ : state) {
    Kernel(signal, channels, window, stride, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * samples));
}

template <auto Kernel>
void window_slopes(benchmark::State& state) {
  const std::size_t channels = 14, window = 1500, stride = 500;
  const auto frames = static_cast<std::size_t>(state.range(0));
  const auto x = random_values(frames * channels, 2);
  std::vector<double> out(((frames - window) / stride + 1) * channels);
  for (auto _ : state) {
    Kernel(x, channels, window, stride, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void cosine_kernel(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 14;
  const auto x = random_values(rows * cols, 3);
  std::vector<double> out(rows * rows);
  for (auto _ : state) {
    Kernel(x, rows, cols, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto sym = random_values(n * n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) sym[j * n + i] = sym[i * n + j];
  }
  std::vector<double> a(n * n), vectors(n * n);
  for (auto _ : state) {
    a = sym;
    benchmark::DoNotOptimize(Kernel(a, n, vectors, 100, 1e-12));
  }
}

}  // namespace

BENCHMARK(rms_frames<k::serial::rms_frames>)->Name("rms_frames/serial")->Arg(60)->Arg(600);
BENCHMARK(rms_frames<k::omp::rms_frames>)->Name("rms_frames/omp")->Arg(60)->Arg(600)->UseRealTime();
BENCHMARK(window_slopes<k::serial::window_slopes>)->Name("window_slopes/serial")->Arg(30000);
BENCHMARK(window_slopes<k::omp::window_slopes>)->Name("window_slopes/omp")->Arg(30000)->UseRealTime();
BENCHMARK(cosine_kernel<k::serial::cosine_kernel>)->Name("cosine_kernel/serial")->Arg(500)->Arg(2000);
BENCHMARK(cosine_kernel<k::omp::cosine_kernel>)->Name("cosine_kernel/omp")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(jacobi<k::serial::jacobi_eigen>)->Name("jacobi/serial")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(jacobi<k::omp::jacobi_eigen>)->Name("jacobi/omp")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
