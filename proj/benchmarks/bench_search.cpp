#include <benchmark/benchmark.h>

#include "lotto/lotto.hpp"

namespace {

lotto::TaskSpec Task() {
  lotto::TaskSpec task;
  task.name = "bench";
  task.verbalizer.label_words = {"bad", "great"};
  return task;
}

std::vector<lotto::Instance> Data(std::size_t n) {
  std::vector<lotto::Instance> data;
  for (std::size_t i = 0; i < n; ++i) {
    data.push_back({"Sample " + std::to_string(i) + (i % 2 ? " great." : " bad."), std::nullopt, i % 2});
  }
  return data;
}

lotto::PromptSpace Space() {
  return lotto::build_space(lotto::ParseLexicon(
      "#NOUNS\nit\nhe\nshe\nthey\n#VERBS\nwas\nis\nfelt\nseems\n#THIRD\nreally\nvery\nso\njust\n", "bench"));
}

// Fresh prior cache per iteration so every call reaches the backend.
void BM_SearchDataset(benchmark::State& state) {
  const lotto::SyntheticOracle oracle(lotto::ParseSyntheticUrl("synthetic:7"));
  const auto task = Task();
  const auto space = Space();
  const auto data = Data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    lotto::BackendClient client(oracle);
    lotto::PriorCache cache;
    lotto::Scorer scorer(client, task, space, cache);
    benchmark::DoNotOptimize(lotto::search_dataset(data, scorer, space.size()));
  }
}
BENCHMARK(BM_SearchDataset)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RankPrompts(benchmark::State& state) {
  const lotto::SyntheticOracle oracle(lotto::ParseSyntheticUrl("synthetic:7"));
  const auto task = Task();
  const auto space = Space();
  const auto data = Data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    lotto::BackendClient client(oracle, {.max_concurrency = static_cast<std::size_t>(state.range(1))});
    lotto::PriorCache cache;
    lotto::Scorer scorer(client, task, space, cache);
    benchmark::DoNotOptimize(lotto::rank_prompts(data, scorer, 10));
  }
}
BENCHMARK(BM_RankPrompts)->Args({50, 1})->Args({50, 8})->Unit(benchmark::kMillisecond);

}  // namespace
