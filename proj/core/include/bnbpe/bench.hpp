#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnbpe/baselines.hpp"
#include "bnbpe/corpus.hpp"
#include "bnbpe/eval.hpp"

namespace bnbpe {

struct TokenizationStats {
  double avg_tokens_per_sample = 0.0;
  double median_tokens = 0.0;  // lower middle for even counts
  // Total tokens / total code points of the normalized text, spaces included.
  double tokens_per_char = 0.0;
  std::size_t sample_count = 0;
  std::size_t total_tokens = 0;
  std::size_t total_codepoints = 0;
};

// Errors: kEmptyCorpus.
TokenizationStats tokenization_stats(std::span<const NormalizedText> corpus,
                                     const TokenizerHandle& handle, std::size_t threads = 1);

struct ThroughputResult {
  double samples_per_sec = 0.0;  // samples_processed / wall_seconds
  double wall_seconds = 0.0;     // median pass
  std::size_t samples_processed = 0;  // per pass
  std::size_t warmup_samples = 0;
  std::vector<double> pass_seconds;
  std::size_t threads = 1;
};

// Seconds from an arbitrary monotonic origin.
using Clock = std::function<double()>;
Clock steady_clock_seconds();

struct ThroughputOptions {
  std::size_t warmup = 100;
  std::size_t repeats = 3;
  std::size_t threads = 1;
  Clock clock;  // steady clock when empty
};

// Encodes the first `warmup` samples untimed, then times `repeats` passes over
// the rest and reports the median (lower middle for even repeats). Token
// output is discarded.
//
// Errors: kCorpusSmallerThanWarmup, kInvalidArgument (repeats == 0).
ThroughputResult measure_throughput(std::span<const NormalizedText> corpus,
                                    const TokenizerHandle& handle,
                                    const ThroughputOptions& options = {});

struct BenchmarkRow {
  std::string tokenizer;
  std::optional<std::size_t> vocab_size;
  std::optional<std::uint64_t> model_fingerprint;
  TokenizationStats stats;
  ThroughputResult throughput;
  std::optional<EvalReport> eval;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::uint64_t corpus_fingerprint = 0;
  std::optional<std::uint64_t> labeled_corpus_fingerprint;
  std::size_t sample_count = 0;
  std::size_t threads = 1;
  std::size_t throughput_threads = 1;
  std::string version;

  // Timing fields are the only non-deterministic part.
  std::string to_json(int indent = 2, bool include_timing = true) const;
};

struct CompareOptions {
  bool include_eval = false;
  ThroughputOptions throughput;
  EvalOptions eval;
  std::size_t threads = 1;  // stats and eval
};

// One row per handle, all computed over `corpus` (and `labeled` for eval).
//
// Errors: kInvalidArgument (no handles, or include_eval without `labeled`),
// plus anything from the components.
BenchmarkReport compare(std::span<const NormalizedText> corpus,
                        std::span<const TokenizerHandle> handles, const CompareOptions& options,
                        const LabeledCorpus* labeled = nullptr);

}  // namespace bnbpe
