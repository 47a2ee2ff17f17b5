#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bnbpe/normalizer.hpp"

namespace bnbpe {

inline constexpr std::int32_t kUnkId = 0;
inline constexpr std::int32_t kPadId = 1;
inline constexpr std::int32_t kFirstSymbolId = 2;
// Token id used by tokenizers that have no vocabulary (whitespace).
inline constexpr std::int32_t kNoVocabId = -1;
inline constexpr std::string_view kUnkSurface = "<unk>";
inline constexpr std::string_view kPadSurface = "<pad>";

enum class ConstraintMode { kBengali, kGeneric };

const char* to_string(ConstraintMode mode);
ConstraintMode parse_constraint_mode(std::string_view text);

struct ConstraintProfile {
  ConstraintMode mode = ConstraintMode::kBengali;
  // Normalized surfaces of word-final inflectional morphemes. Ignored in
  // generic mode.
  std::set<std::string> suffix_lexicon;
  // Merges never cross a word boundary in either mode.
  static constexpr bool block_cross_word = true;

  // True if `surface` is a grapheme-aligned concatenation of one or more
  // lexicon entries (e.g. গুলো + র).
  bool is_suffix_stack(std::string_view surface) const;

  std::uint64_t lexicon_hash() const;
  std::string canonical() const;

  friend bool operator==(const ConstraintProfile&, const ConstraintProfile&) = default;
};

// Built-in lexicon, identical to data/suffixes_bn.txt, normalized with `config`.
std::set<std::string> default_suffix_lexicon(const NormalizationConfig& config = {});

// One entry per line; blank lines and lines starting with '#' are skipped.
// Entries go through clean() so they match normalized corpus text.
std::set<std::string> parse_suffix_lexicon(std::istream& in, const NormalizationConfig& config);
std::set<std::string> load_suffix_lexicon(const std::string& path,
                                          const NormalizationConfig& config);

struct Symbol {
  std::string surface;
  std::int32_t id = kUnkId;
};

struct MergeRule {
  std::string left;
  std::string right;
  std::size_t rank = 0;
  std::uint64_t frequency_at_merge = 0;

  std::string merged() const { return left + right; }
};

struct MergeContext {
  bool word_final = false;  // `right` is the last symbol of its word unit
  bool crosses_word_boundary = false;
};

// False when the pair spans a word boundary, when the merged symbol would
// start with a combining mark, or (bengali mode) when `right` is word-final
// and the merge would fuse a non-suffix prefix with a trailing suffix stack.
bool is_merge_allowed(std::string_view left, std::string_view right, MergeContext context,
                      const ConstraintProfile& profile);
bool is_merge_allowed(const Symbol& left, const Symbol& right, MergeContext context,
                      const ConstraintProfile& profile);

// A piece of normalized text that BPE operates on independently: a run of
// non-punctuation between spaces, or a single punctuation code point.
// `text` views into the string passed to pretokenize().
struct WordUnit {
  std::string_view text;
  bool starts_word = false;  // first unit of a whitespace-delimited word
};

std::vector<WordUnit> pretokenize(std::string_view normalized);
std::vector<WordUnit> pretokenize(const NormalizedText& text);

struct Token {
  std::string surface;
  std::int32_t id = kUnkId;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenSequence {
  std::vector<Token> tokens;
  // Token indices where a new whitespace-delimited word begins, ascending.
  std::vector<std::size_t> word_boundaries;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::vector<std::string> surfaces() const;
  std::vector<std::int32_t> ids() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// Frozen, immutable tokenizer. Safe to share across threads.
class BpeModel {
 public:
  // Builds the vocabulary (specials, sorted alphabet, one entry per merge in
  // rank order) and checks every model invariant. Throws kCorruptFile with the
  // violated invariant in the message.
  static BpeModel assemble(std::vector<std::string> alphabet, std::vector<MergeRule> merges,
                           ConstraintProfile profile, std::size_t target_vocab_size,
                           std::uint64_t min_pair_freq, NormalizationConfig normalization);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<MergeRule>& merges() const { return merges_; }
  const ConstraintProfile& profile() const { return profile_; }
  const NormalizationConfig& normalization() const { return normalization_; }
  std::size_t target_vocab_size() const { return target_vocab_size_; }
  std::uint64_t min_pair_freq() const { return min_pair_freq_; }

  // Specials + alphabet + merges.
  std::size_t vocab_size() const { return id_to_surface_.size(); }
  std::optional<std::int32_t> id_of(std::string_view surface) const;
  const std::string& surface_of(std::int32_t id) const;
  std::int32_t first_merge_id() const { return kFirstSymbolId + static_cast<std::int32_t>(alphabet_.size()); }

  // Rank of the rule merging (left, right), or -1.
  std::int32_t merge_rank(std::int32_t left, std::int32_t right) const;
  // is_merge_allowed for the rule of this rank, precomputed for both
  // positions of its right operand.
  bool rule_allowed(std::size_t rank, bool word_final) const {
    return (word_final ? allowed_final_ : allowed_mid_)[rank];
  }

  std::uint64_t normalization_fingerprint() const { return normalization_.fingerprint(); }
  std::uint64_t config_fingerprint() const { return config_fingerprint_; }

  // Same model restricted to the first `k` merges.
  BpeModel truncated(std::size_t k) const;

 private:
  BpeModel() = default;

  std::vector<std::string> alphabet_;
  std::vector<MergeRule> merges_;
  ConstraintProfile profile_;
  NormalizationConfig normalization_;
  std::size_t target_vocab_size_ = 0;
  std::uint64_t min_pair_freq_ = 2;
  std::uint64_t config_fingerprint_ = 0;

  std::vector<std::string> id_to_surface_;
  std::unordered_map<std::string, std::int32_t> surface_to_id_;
  std::unordered_map<std::uint64_t, std::int32_t> pair_rank_;
  std::vector<bool> allowed_mid_;
  std::vector<bool> allowed_final_;
};

std::uint64_t model_config_fingerprint(const NormalizationConfig& normalization,
                                       const ConstraintProfile& profile,
                                       std::size_t target_vocab_size,
                                       std::uint64_t min_pair_freq);

struct TrainingOptions {
  std::size_t target_vocab_size = 8000;
  ConstraintProfile profile;
  std::uint64_t min_pair_freq = 2;
  // Word counting is split across threads; the result does not depend on it.
  std::size_t threads = 1;
};

// Word-frequency-weighted BPE over grapheme clusters. Each step merges the
// most frequent allowed adjacent pair (ties: lexicographically smallest
// (left, right)); stops at the target size, when the best count drops below
// min_pair_freq, or when no allowed pair is left. Pairs whose concatenation
// is already in the vocabulary are never merged, so each merge adds exactly
// one entry.
//
// Errors: kEmptyCorpus, kTargetTooSmall, kFingerprintMismatch (texts not
// normalized with `normalization`).
BpeModel train(std::span<const NormalizedText> corpus, const TrainingOptions& options,
               const NormalizationConfig& normalization);

// Applies the lowest-rank allowed merge (leftmost on ties) until none
// applies, per word unit. Graphemes outside the alphabet keep their surface
// and get kUnkId.
//
// Errors: kFingerprintMismatch.
TokenSequence encode(const NormalizedText& text, const BpeModel& model);

// Encodes a single word unit, appending to `out`.
void encode_unit(std::string_view unit, const BpeModel& model, std::vector<Token>& out);

// Joins tokens within a word and separates words with single spaces.
std::string decode(const TokenSequence& tokens);

// Rebuilds a TokenSequence from ids; unknown ids decode to "<unk>".
TokenSequence tokens_from_ids(std::span<const std::int32_t> ids,
                              std::span<const std::size_t> word_boundaries,
                              const BpeModel& model);

}  // namespace bnbpe
