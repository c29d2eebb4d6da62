#include <benchmark/benchmark.h>

#include "deepregex/baselines.hpp"
#include "deepregex/corpus.hpp"

using namespace deepregex;

namespace {

void BM_GenerateCorpus(benchmark::State& state) {
  GeneratorConfig g;
  g.target_size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_corpus(g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCorpus)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BowNearest(benchmark::State& state) {
  GeneratorConfig g;
  g.target_size = 6500;
  Corpus corpus = generate_corpus(g);
  BowNearestNeighbor nn(corpus);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(nn.nearest(corpus[i++ % corpus.size()].synthetic));
}
BENCHMARK(BM_BowNearest)->Unit(benchmark::kMicrosecond);

}  // namespace
