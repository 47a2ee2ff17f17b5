#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "bnbpe/bpe.hpp"

namespace bnbpe {

enum class TokenizerKind { kWhitespace, kBengaliBpe, kGenericBpe };

const char* to_string(TokenizerKind kind);  // "whitespace" | "bengali" | "generic"
TokenizerKind parse_tokenizer_kind(std::string_view text);

// Uniform handle for the benchmark and evaluation harness. Whitespace carries
// no model; the BPE kinds need one whose constraint mode matches.
class TokenizerHandle {
 public:
  static TokenizerHandle whitespace();
  // Throws kMissingModel on a null model and kInvalidArgument when the
  // model's mode does not match `kind`.
  static TokenizerHandle bpe(TokenizerKind kind, std::shared_ptr<const BpeModel> model);

  TokenizerKind kind() const { return kind_; }
  const BpeModel* model() const { return model_.get(); }
  std::string name() const { return to_string(kind_); }

 private:
  TokenizerHandle(TokenizerKind kind, std::shared_ptr<const BpeModel> model)
      : kind_(kind), model_(std::move(model)) {}

  TokenizerKind kind_;
  std::shared_ptr<const BpeModel> model_;
};

// Splits on single spaces; punctuation stays attached to its word. Tokens
// carry kNoVocabId and every token starts a word.
TokenSequence whitespace_tokenize(const NormalizedText& text);

TokenSequence tokenize(const TokenizerHandle& handle, const NormalizedText& text);

}  // namespace bnbpe
