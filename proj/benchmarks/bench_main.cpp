#include <benchmark/benchmark.h>

#include <random>

#include "umt/metrics.hpp"
#include "umt/training.hpp"

using namespace umt;

namespace {

ModelConfig bench_model(std::size_t d) {
  ModelConfig c;
  c.vocab_size = 86;
  c.d_model = d;
  c.layers = 2;
  c.heads = 4;
  c.ffn_dim = 4 * d;
  c.max_len = 128;
  return c;
}

std::vector<int> random_ids(std::mt19937_64& rng, std::size_t n, int vocab) {
  std::uniform_int_distribution<int> tok(kFirstCorpusId, vocab - 1);
  std::vector<int> out(n);
  for (auto& x : out) x = tok(rng);
  return out;
}

}  // namespace

static void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-1, 1);
  std::vector<float> a(n * n), b(n * n);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  const auto ta = Tensor<float>::from({n, n}, a), tb = Tensor<float>::from({n, n}, b);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(ta, tb));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

static void BM_TrainStep(benchmark::State& state) {
  TrainConfig cfg;
  cfg.d_model = static_cast<std::size_t>(state.range(0));
  cfg.layers = 2;
  cfg.ffn_dim = 4 * cfg.d_model;
  cfg.batch = 8;
  cfg.steps = 1;
  std::mt19937_64 rng(2);
  TrainingCorpora corpora;
  for (int i = 0; i < 64; ++i) {
    corpora.src.push_back(random_ids(rng, 64, 86));
    PoemLines poem;
    for (int l = 0; l < 4; ++l) poem.push_back(random_ids(rng, 7, 86));
    corpora.tgt.push_back(poem);
  }
  Seq2Seq<float> model(cfg.model_config(86), 3);
  for (auto _ : state) benchmark::DoNotOptimize(train(corpora, cfg, model));
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GreedyGeneration(benchmark::State& state) {
  Seq2Seq<float> model(bench_model(64), 4);
  std::mt19937_64 rng(5);
  const auto src = encoder_input(random_ids(rng, 28, 86));
  const auto len = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model.generate_greedy(Side::Tgt, Side::Src, src, len));
}
BENCHMARK(BM_GreedyGeneration)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_CorpusBleu(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::vector<std::vector<int>> cands, refs;
  for (int i = 0; i < state.range(0); ++i) {
    cands.push_back(random_ids(rng, 28, 40));
    refs.push_back(random_ids(rng, 28, 40));
  }
  for (auto _ : state) benchmark::DoNotOptimize(bleu(cands, refs));
}
BENCHMARK(BM_CorpusBleu)->Arg(200)->Arg(2000);

static void BM_RepetitionRatio(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto seq = random_ids(rng, static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(repetition_ratio(seq));
}
BENCHMARK(BM_RepetitionRatio)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
