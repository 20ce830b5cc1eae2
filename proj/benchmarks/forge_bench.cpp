#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "forge/agreement/statistics.hpp"
#include "forge/dataset/filter.hpp"
#include "forge/dataset/stats.hpp"
#include "forge/eval/score.hpp"
#include "forge/eval/trajectory.hpp"

using namespace forge;

static void BM_ParseStrict(benchmark::State& state) {
  KeyedRng rng(1, "bench");
  const auto text = testkit::strict_judge_text(testkit::random_pairs(rng));
  for (auto _ : state) benchmark::DoNotOptimize(eval::parse_assessments(text));
}
BENCHMARK(BM_ParseStrict);

static void BM_ParseLenient(benchmark::State& state) {
  KeyedRng rng(2, "bench");
  const auto text = testkit::lenient_judge_text(testkit::random_pairs(rng));
  for (auto _ : state) benchmark::DoNotOptimize(eval::parse_assessments(text));
}
BENCHMARK(BM_ParseLenient);

static void BM_Aggregate(benchmark::State& state) {
  std::vector<eval::MetricSample> records;
  for (const auto& t : testkit::synthetic_trajectories(10, static_cast<std::size_t>(state.range(0)), "judge", 3)) {
    for (auto& r : eval::segment_trajectory(t)) records.push_back(std::move(r));
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::aggregate(records));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records.size()));
}
BENCHMARK(BM_Aggregate)->Arg(30)->Arg(294);

static void BM_FilterFuzzed(benchmark::State& state) {
  const dataset::DialogueFilter filter;
  const auto corpus = testkit::small_corpus();
  KeyedRng rng(4, "bench");
  std::vector<Dialogue> dialogues;
  for (int i = 0; i < 200; ++i) dialogues.push_back(testkit::fuzz_dialogue(rng, corpus, i));
  for (auto _ : state) {
    for (const auto& d : dialogues) benchmark::DoNotOptimize(filter.filter(d));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * dialogues.size()));
}
BENCHMARK(BM_FilterFuzzed);

static void BM_Pearson(benchmark::State& state) {
  KeyedRng rng(5, "bench");
  std::vector<double> a, b;
  for (int i = 0; i < state.range(0); ++i) {
    a.push_back(rng.uniform(0, 10));
    b.push_back(rng.uniform(0, 10));
  }
  const auto s = agreement::PairedSeries::of(a, b);
  for (auto _ : state) benchmark::DoNotOptimize(agreement::pearson(s));
}
BENCHMARK(BM_Pearson)->Arg(16)->Arg(4096);

static void BM_CorpusStats(benchmark::State& state) {
  const auto corpus = testkit::small_corpus();
  KeyedRng rng(6, "bench");
  std::vector<Dialogue> dialogues;
  for (int i = 0; i < 2000; ++i) dialogues.push_back(testkit::random_dialogue(rng, corpus, i));
  for (auto _ : state) benchmark::DoNotOptimize(dataset::corpus_stats(dialogues));
}
BENCHMARK(BM_CorpusStats);

BENCHMARK_MAIN();
