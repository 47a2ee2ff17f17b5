#include <benchmark/benchmark.h>

#include <memory>

#include "bnbpe/baselines.hpp"
#include "bnbpe/corpus.hpp"
#include "bnbpe/grapheme.hpp"

namespace {

using namespace bnbpe;

const std::vector<NormalizedText>& corpus() {
  static const auto texts = load_text_lines(std::string(BNBPE_DATA_DIR) + "/sample_corpus.txt", {});
  return texts;
}

std::vector<std::string> raw_lines() {
  std::vector<std::string> out;
  for (const auto& t : corpus()) out.push_back(t.content());
  return out;
}

std::shared_ptr<const BpeModel> model(ConstraintMode mode) {
  static std::shared_ptr<const BpeModel> cache[2];
  auto& slot = cache[mode == ConstraintMode::kBengali ? 0 : 1];
  if (!slot) {
    TrainingOptions o;
    o.profile.mode = mode;
    if (mode == ConstraintMode::kBengali) o.profile.suffix_lexicon = default_suffix_lexicon();
    slot = std::make_shared<const BpeModel>(train(corpus(), o, {}));
  }
  return slot;
}

TokenizerHandle handle_for(int which) {
  switch (which) {
    case 0: return TokenizerHandle::whitespace();
    case 1: return TokenizerHandle::bpe(TokenizerKind::kBengaliBpe, model(ConstraintMode::kBengali));
    default: return TokenizerHandle::bpe(TokenizerKind::kGenericBpe, model(ConstraintMode::kGeneric));
  }
}

void BM_Tokenize(benchmark::State& state) {
  const auto handle = handle_for(static_cast<int>(state.range(0)));
  state.SetLabel(handle.name());
  std::size_t tokens = 0;
  for (auto _ : state) {
    for (const auto& text : corpus()) {
      auto seq = tokenize(handle, text);
      tokens += seq.size();
      benchmark::DoNotOptimize(seq);
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus().size()));
  state.counters["tokens"] = benchmark::Counter(static_cast<double>(tokens), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Tokenize)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  TrainingOptions o;
  o.target_vocab_size = static_cast<std::size_t>(state.range(0));
  o.profile.suffix_lexicon = default_suffix_lexicon();
  for (auto _ : state) {
    auto m = train(corpus(), o, {});
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_Train)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_Normalize(benchmark::State& state) {
  const auto lines = raw_lines();
  for (auto _ : state) {
    for (const auto& line : lines) {
      auto t = clean(line, {});
      benchmark::DoNotOptimize(t);
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lines.size()));
}
BENCHMARK(BM_Normalize)->Unit(benchmark::kMillisecond);

void BM_Segment(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& text : corpus()) {
      auto spans = cluster_spans(text.content());
      benchmark::DoNotOptimize(spans);
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus().size()));
}
BENCHMARK(BM_Segment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
