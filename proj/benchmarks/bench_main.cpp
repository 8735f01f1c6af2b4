#include <benchmark/benchmark.h>

#include "polarkit/agreement.hpp"
#include "polarkit/classifiers.hpp"
#include "polarkit/polling.hpp"
#include "polarkit/random.hpp"
#include "synthetic.hpp"

using namespace polarkit;

namespace {

void BM_PollScore(benchmark::State& state) {
  synth::FlipOptions opt;
  opt.reviews = 200;
  const auto r = synth::bigram_flip_corpus(opt);
  const PolarityMatcher matcher(r.unigrams, r.bigrams);
  std::vector<std::vector<std::string>> docs;
  for (const auto& rev : r.corpus.reviews()) docs.push_back(tokenize(rev.text));
  std::size_t tokens = 0;
  for (const auto& d : docs) tokens += d.size();
  for (auto _ : state)
    for (const auto& d : docs)
      benchmark::DoNotOptimize(matcher.score(d, PollingMode::UnigramPlusBigram));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens));
}
BENCHMARK(BM_PollScore);

void BM_Kappa(benchmark::State& state) {
  Rng rng(1);
  std::vector<std::pair<Judgment, Judgment>> pairs;
  for (std::int64_t i = 0; i < state.range(0); ++i)
    pairs.emplace_back(static_cast<Judgment>(rng.below(5)), static_cast<Judgment>(rng.below(5)));
  for (auto _ : state) benchmark::DoNotOptimize(cohen_kappa(pairs).kappa);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Kappa)->Arg(200)->Arg(20000);

void BM_Train(benchmark::State& state) {
  const auto kind = static_cast<ClassifierKind>(state.range(0));
  Rng rng(7);
  Dataset data;
  for (int i = 0; i < 500; ++i) {
    const bool pos = i % 2 == 0;
    std::vector<double> x(20);
    for (auto& v : x) v = rng.normal() + (pos ? 0.4 : -0.4);
    data.add(x, pos ? Sentiment::Positive : Sentiment::Negative, std::to_string(i));
  }
  auto spec = ClassifierSpec::defaults(kind, 3);
  if (auto* rf = std::get_if<RandomForestParams>(&spec.params)) rf->threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(spec, data));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Train)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
