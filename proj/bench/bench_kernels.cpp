#include "guided/imaging.hpp"
#include "guided/kernels.hpp"
#include "guided/reconstruction.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace k = guided::kernels;

namespace {

std::vector<double> filled(std::size_t n, double seed) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = seed + 1e-3 * static_cast<double>(i % 997);
  return v;
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = filled(n, 0.5);
  const auto b = filled(n, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? k::parallel::dot(a, b) : k::serial::dot(a, b));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * 2 * n * sizeof(double)));
}

template <bool Parallel>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = filled(n * n, 0.1);
  const auto b = filled(n * n, 0.2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    if (Parallel) {
      k::parallel::matmul(a.data(), b.data(), c.data(), n, n, n);
    } else {
      k::serial::matmul(a.data(), b.data(), c.data(), n, n, n);
    }
    benchmark::ClobberMemory();
  }
}

template <bool Parallel>
void BM_BlockMean(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const std::size_t r = 4;
  const auto img = filled(w * w, 0.3);
  std::vector<double> low((w / r) * (w / r));
  for (auto _ : state) {
    if (Parallel) {
      k::parallel::block_mean(img.data(), w, r, low.data());
    } else {
      k::serial::block_mean(img.data(), w, r, low.data());
    }
    benchmark::ClobberMemory();
  }
}

void BM_ConsistentReconstruct(benchmark::State& state) {
  const auto w = static_cast<guided::Index>(state.range(0));
  const guided::ImageGrid img = guided::synthetic_image(w);
  const guided::MagnifySetup setup = guided::MagnifySetup::with_k_scale(w, 2, 2.0);
  const auto prob = guided::ReconstructionProblem::from_signal(
      guided::block_sampling_projector(w, 2), guided::dct_lowpass_projector(w, setup.k), img.pixels);
  for (auto _ : state) {
    benchmark::DoNotOptimize(guided::consistent_reconstruct(prob).f_consistent.data());
  }
}

}  // namespace

BENCHMARK(BM_Dot<false>)->Arg(1 << 12)->Arg(1 << 20);
BENCHMARK(BM_Dot<true>)->Arg(1 << 12)->Arg(1 << 20);
BENCHMARK(BM_Matmul<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_Matmul<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_BlockMean<false>)->Arg(256)->Arg(1024);
BENCHMARK(BM_BlockMean<true>)->Arg(256)->Arg(1024);
BENCHMARK(BM_ConsistentReconstruct)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
