#include <benchmark/benchmark.h>

#include "deepregex/seq2seq.hpp"

using namespace deepregex;

namespace {

void BM_LstmStep(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const int batch = static_cast<int>(state.range(1));
  Rng rng(1);
  LstmParams<float> p{Mat<float>::Random(4 * h, h), Mat<float>::Random(4 * h, h), Mat<float>::Random(4 * h, 1)};
  Mat<float> x = Mat<float>::Random(h, batch), hp = Mat<float>::Random(h, batch), cp = Mat<float>::Random(h, batch);
  for (auto _ : state) benchmark::DoNotOptimize(lstm_step<float>(p, x, hp, cp));
}
BENCHMARK(BM_LstmStep)->Args({128, 1})->Args({128, 32})->Args({512, 32});

ModelConfig bench_config() {
  ModelConfig c;
  c.src_vocab = 80;
  c.tgt_vocab = 40;
  return c;
}

std::vector<Example> bench_batch(int n) {
  Rng rng(2);
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    Example ex;
    for (int k = 0; k < 12; ++k) ex.source.push_back(4 + static_cast<int>(rng.below(76)));
    for (int k = 0; k < 25; ++k) ex.target.push_back(4 + static_cast<int>(rng.below(36)));
    out.push_back(std::move(ex));
  }
  return out;
}

void BM_LossAndGradient(benchmark::State& state) {
  Rng rng(1);
  auto params = ModelParams<float>::uniform(bench_config(), rng);
  auto grad = ModelParams<float>::zeros(bench_config());
  auto batch = bench_batch(32);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradient<float>(params, batch, grad));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_LossAndGradient)->Unit(benchmark::kMillisecond);

void BM_Translate(benchmark::State& state) {
  Rng rng(1);
  auto params = ModelParams<float>::uniform(bench_config(), rng);
  auto batch = bench_batch(1);
  for (auto _ : state) benchmark::DoNotOptimize(translate<float>(params, batch[0].source, 40));
}
BENCHMARK(BM_Translate)->Unit(benchmark::kMicrosecond);

}  // namespace
