#include "bnbpe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bnbpe/errors.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/model_io.hpp"
#include "bnbpe/parallel.hpp"
#include "bnbpe/utf8.hpp"
#include "bnbpe/version.hpp"

namespace bnbpe {
namespace {

// Keeps the optimizer from discarding the tokenization work.
std::size_t encode_range(const TokenizerHandle& handle, std::span<const NormalizedText> texts) {
  std::size_t tokens = 0;
  for (const auto& t : texts) tokens += tokenize(handle, t).size();
  return tokens;
}

}  // namespace

TokenizationStats tokenization_stats(std::span<const NormalizedText> corpus,
                                     const TokenizerHandle& handle, std::size_t threads) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no samples to measure");
  std::vector<std::size_t> counts(corpus.size());
  std::vector<std::size_t> cps(corpus.size());
  parallel_chunks(corpus.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      counts[i] = tokenize(handle, corpus[i]).size();
      cps[i] = count_codepoints(corpus[i].content());
    }
  });
  TokenizationStats s;
  s.sample_count = corpus.size();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    s.total_tokens += counts[i];
    s.total_codepoints += cps[i];
  }
  s.avg_tokens_per_sample = static_cast<double>(s.total_tokens) / static_cast<double>(s.sample_count);
  s.tokens_per_char =
      s.total_codepoints == 0 ? 0.0
                              : static_cast<double>(s.total_tokens) / static_cast<double>(s.total_codepoints);
  auto mid = counts.begin() + static_cast<std::ptrdiff_t>((counts.size() - 1) / 2);
  std::nth_element(counts.begin(), mid, counts.end());
  s.median_tokens = static_cast<double>(*mid);
  return s;
}

Clock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

ThroughputResult measure_throughput(std::span<const NormalizedText> corpus,
                                    const TokenizerHandle& handle,
                                    const ThroughputOptions& options) {
  if (corpus.size() <= options.warmup) {
    throw Error(ErrorCode::kCorpusSmallerThanWarmup,
                std::to_string(corpus.size()) + " samples, warmup needs more than " +
                    std::to_string(options.warmup));
  }
  if (options.repeats == 0) throw Error(ErrorCode::kInvalidArgument, "repeats must be positive");
  const Clock clock = options.clock ? options.clock : steady_clock_seconds();
  const std::size_t threads = std::max<std::size_t>(1, options.threads);

  volatile std::size_t sink = encode_range(handle, corpus.first(options.warmup));
  const auto timed = corpus.subspan(options.warmup);

  ThroughputResult r;
  r.warmup_samples = options.warmup;
  r.samples_processed = timed.size();
  r.threads = threads;
  for (std::size_t rep = 0; rep < options.repeats; ++rep) {
    const double start = clock();
    if (threads == 1) {
      sink = sink + encode_range(handle, timed);
    } else {
      std::vector<std::size_t> partial(threads);
      parallel_chunks(timed.size(), threads, [&](std::size_t b, std::size_t e, std::size_t t) {
        partial[t] = encode_range(handle, timed.subspan(b, e - b));
      });
      for (auto p : partial) sink = sink + p;
    }
    r.pass_seconds.push_back(clock() - start);
  }
  auto sorted = r.pass_seconds;
  std::sort(sorted.begin(), sorted.end());
  // A pass faster than the clock can resolve is reported as one nanosecond.
  r.wall_seconds = std::max(sorted[(sorted.size() - 1) / 2], 1e-9);
  r.samples_per_sec = static_cast<double>(r.samples_processed) / r.wall_seconds;
  return r;
}

std::string BenchmarkReport::to_json(int indent, bool include_timing) const {
  using json = nlohmann::ordered_json;
  json j;
  j["version"] = version;
  j["corpus_fingerprint"] = to_hex(corpus_fingerprint);
  if (labeled_corpus_fingerprint) j["labeled_corpus_fingerprint"] = to_hex(*labeled_corpus_fingerprint);
  j["sample_count"] = sample_count;
  j["threads"] = threads;
  j["throughput_threads"] = throughput_threads;
  j["tokens_per_char_denominator"] = "code points of normalized text, spaces included";
  j["throughput_scope"] = "tokenization only; normalization and file I/O excluded";
  auto& out_rows = j["rows"] = json::array();
  for (const auto& row : rows) {
    json r;
    r["tokenizer"] = row.tokenizer;
    r["vocab_size"] = row.vocab_size ? json(*row.vocab_size) : json(nullptr);
    r["model_fingerprint"] = row.model_fingerprint ? json(to_hex(*row.model_fingerprint)) : json(nullptr);
    r["avg_tokens_per_sample"] = row.stats.avg_tokens_per_sample;
    r["median_tokens"] = row.stats.median_tokens;
    r["tokens_per_char"] = row.stats.tokens_per_char;
    r["sample_count"] = row.stats.sample_count;
    r["total_tokens"] = row.stats.total_tokens;
    r["total_codepoints"] = row.stats.total_codepoints;
    if (include_timing) {
      r["samples_per_sec"] = row.throughput.samples_per_sec;
      r["wall_seconds"] = row.throughput.wall_seconds;
      r["pass_seconds"] = row.throughput.pass_seconds;
    }
    r["samples_processed"] = row.throughput.samples_processed;
    r["warmup_samples"] = row.throughput.warmup_samples;
    if (row.eval) {
      auto e = json::parse(row.eval->to_json());
      e.erase("tokenizer");
      r["eval"] = std::move(e);
    }
    out_rows.push_back(std::move(r));
  }
  return j.dump(indent);
}

BenchmarkReport compare(std::span<const NormalizedText> corpus,
                        std::span<const TokenizerHandle> handles, const CompareOptions& options,
                        const LabeledCorpus* labeled) {
  if (handles.empty()) throw Error(ErrorCode::kInvalidArgument, "no tokenizers to compare");
  if (options.include_eval && labeled == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation requested without a labeled corpus");
  }
  BenchmarkReport report;
  report.version = std::string(kVersion);
  report.corpus_fingerprint = texts_fingerprint(corpus);
  report.sample_count = corpus.size();
  report.threads = std::max<std::size_t>(1, options.threads);
  report.throughput_threads = std::max<std::size_t>(1, options.throughput.threads);
  if (labeled) report.labeled_corpus_fingerprint = labeled->fingerprint();

  EvalOptions eval_options = options.eval;
  eval_options.threads = report.threads;
  for (const auto& handle : handles) {
    BenchmarkRow row;
    row.tokenizer = handle.name();
    if (const auto* m = handle.model()) {
      row.vocab_size = m->vocab_size();
      std::ostringstream bytes;
      write_model(*m, bytes);
      row.model_fingerprint = fnv1a64(bytes.str());
    }
    row.stats = tokenization_stats(corpus, handle, report.threads);
    row.throughput = measure_throughput(corpus, handle, options.throughput);
    if (options.include_eval) row.eval = tune_and_evaluate(*labeled, handle, eval_options);
    report.rows.push_back(std::move(row));
  }
  // Rows must describe the same inputs; a caller mutating them mid-run would break the table.
  if (texts_fingerprint(corpus) != report.corpus_fingerprint ||
      (labeled && labeled->fingerprint() != *report.labeled_corpus_fingerprint)) {
    throw Error(ErrorCode::kFingerprintMismatch, "corpus changed while the benchmark was running");
  }
  return report;
}

}  // namespace bnbpe
