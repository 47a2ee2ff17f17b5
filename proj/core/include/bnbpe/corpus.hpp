#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnbpe/normalizer.hpp"

namespace bnbpe {

enum class CorpusFormat { kCsv, kJsonl };

// "csv" | "jsonl"; anything else throws kInvalidArgument.
CorpusFormat parse_corpus_format(std::string_view text);
// From the file extension (.jsonl/.json -> jsonl, otherwise csv).
CorpusFormat guess_corpus_format(std::string_view path);

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };

const char* to_string(Split split);

struct RawSample {
  NormalizedText text;
  std::string label;
  std::size_t line = 0;  // 1-based line where the record starts
};

struct LoadOptions {
  NormalizationConfig normalization;
  // Malformed rows are skipped and reported; one more than this is fatal.
  std::size_t max_malformed = 10;
  std::size_t threads = 1;
};

struct LoadResult {
  std::vector<RawSample> samples;
  std::size_t dropped_count = 0;  // empty after normalization
  std::vector<std::string> malformed;  // "line N: reason"
};

// CSV needs a header row with `text` and `label` columns (RFC 4180 quoting,
// any column order, extra columns ignored). JSONL needs one object per line
// with string `text` and string or integer `label`.
//
// Errors: kMissingColumn, kMalformedRow (past the threshold), kIo.
LoadResult read_labeled_corpus(std::istream& in, CorpusFormat format, const LoadOptions& options);
LoadResult load_labeled_corpus(const std::string& path, CorpusFormat format,
                               const LoadOptions& options);

// Parses one RFC 4180 record starting at the stream position. Returns false at
// end of input. Throws kMalformedRow on an unterminated quote or a stray quote
// inside an unquoted field (the stream is left after the bad record).
// `lines_consumed` counts physical lines, including embedded newlines.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& lines_consumed);
std::string csv_escape(std::string_view field);

struct LabeledSample {
  NormalizedText text;
  std::size_t label = 0;  // index into LabeledCorpus::label_names
  Split split = Split::kTrain;
};

struct SplitRatios {
  double train = 0.70;
  double val = 0.10;
  double test = 0.20;

  std::array<double, 3> as_array() const { return {train, val, test}; }
};

inline constexpr std::uint64_t kDefaultSeed = 42;

struct LabeledCorpus {
  std::vector<LabeledSample> samples;  // input order
  std::vector<std::string> label_names;  // sorted
  SplitRatios ratios;
  std::uint64_t seed = kDefaultSeed;

  std::vector<const LabeledSample*> split(Split which) const;
  std::size_t count(Split which) const;
  // Covers text, label name and split of every sample, in order.
  std::uint64_t fingerprint() const;
};

// Per class (in sorted label order), shuffles that class's samples with one
// mt19937_64 stream seeded by `seed` (Fisher-Yates with rejection-sampled
// bounded draws, so the result is identical on every platform), then assigns
// counts by largest remainder; remainder ties go to train, then val, then test.
//
// Errors: kClassTooSmall (< 3 samples), kInvalidArgument (bad ratios).
LabeledCorpus stratified_split(std::vector<RawSample> samples, SplitRatios ratios = {},
                               std::uint64_t seed = kDefaultSeed);

// Largest-remainder apportionment of n items.
std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& ratios);

// Split directory layout: train.csv, val.csv, test.csv with `text,label`
// columns holding normalized text.
void write_split_dir(const LabeledCorpus& corpus, const std::string& dir);

// Reads whichever of the three files exist. Label names are the sorted union
// of labels in the files that were read.
LabeledCorpus read_split_dir(const std::string& dir, const LoadOptions& options);

// Reads one sample per non-empty line; empty-after-normalization lines are dropped.
std::vector<NormalizedText> read_text_lines(std::istream& in, const NormalizationConfig& config,
                                            std::size_t threads = 1);
std::vector<NormalizedText> load_text_lines(const std::string& path,
                                            const NormalizationConfig& config,
                                            std::size_t threads = 1);

std::uint64_t texts_fingerprint(std::span<const NormalizedText> texts);

}  // namespace bnbpe
