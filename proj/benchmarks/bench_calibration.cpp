#include <benchmark/benchmark.h>

#include <random>

#include "lotto/lotto.hpp"

namespace {

std::vector<double> RandomLogits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

void BM_CalibratePredict(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto o = lotto::softmax(RandomLogits(n, 1));
  const auto q = lotto::softmax(RandomLogits(n, 2));
  for (auto _ : state) {
    const auto p = lotto::calibrate(o, q);
    benchmark::DoNotOptimize(lotto::predict(p));
  }
}
BENCHMARK(BM_CalibratePredict)->Arg(2)->Arg(4)->Arg(16);

void BM_MutualInformation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = lotto::softmax(RandomLogits(n, 3));
  const auto p = lotto::softmax(RandomLogits(n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(lotto::mutual_information(q, p));
}
BENCHMARK(BM_MutualInformation)->Arg(2)->Arg(4)->Arg(16);

void BM_EnsembleVote(benchmark::State& state) {
  std::vector<lotto::ProbVector> members;
  for (int k = 0; k < state.range(0); ++k) members.push_back(lotto::softmax(RandomLogits(4, 10 + k)));
  for (auto _ : state) benchmark::DoNotOptimize(lotto::ensemble_vote(members));
}
BENCHMARK(BM_EnsembleVote)->Arg(1)->Arg(10);

}  // namespace
