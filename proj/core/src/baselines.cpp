#include "bnbpe/baselines.hpp"

#include "bnbpe/errors.hpp"

namespace bnbpe {

const char* to_string(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::kWhitespace: return "whitespace";
    case TokenizerKind::kBengaliBpe: return "bengali";
    case TokenizerKind::kGenericBpe: return "generic";
  }
  return "whitespace";
}

TokenizerKind parse_tokenizer_kind(std::string_view text) {
  if (text == "whitespace") return TokenizerKind::kWhitespace;
  if (text == "bengali") return TokenizerKind::kBengaliBpe;
  if (text == "generic") return TokenizerKind::kGenericBpe;
  throw Error(ErrorCode::kInvalidArgument, "unknown tokenizer '" + std::string(text) + "'");
}

TokenizerHandle TokenizerHandle::whitespace() { return {TokenizerKind::kWhitespace, nullptr}; }

TokenizerHandle TokenizerHandle::bpe(TokenizerKind kind, std::shared_ptr<const BpeModel> model) {
  if (kind == TokenizerKind::kWhitespace) {
    throw Error(ErrorCode::kInvalidArgument, "whitespace tokenizer takes no model");
  }
  if (!model) throw Error(ErrorCode::kMissingModel, std::string(to_string(kind)) + " needs a model");
  const auto expected =
      kind == TokenizerKind::kBengaliBpe ? ConstraintMode::kBengali : ConstraintMode::kGeneric;
  if (model->profile().mode != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(to_string(kind)) + " tokenizer given a " +
                    to_string(model->profile().mode) + "-mode model");
  }
  return {kind, std::move(model)};
}

TokenSequence whitespace_tokenize(const NormalizedText& text) {
  TokenSequence seq;
  const std::string& s = text.content();
  std::size_t start = 0;
  while (start < s.size()) {
    auto end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) {
      seq.word_boundaries.push_back(seq.tokens.size());
      seq.tokens.push_back({s.substr(start, end - start), kNoVocabId});
    }
    start = end + 1;
  }
  return seq;
}

TokenSequence tokenize(const TokenizerHandle& handle, const NormalizedText& text) {
  if (handle.kind() == TokenizerKind::kWhitespace) return whitespace_tokenize(text);
  if (handle.model() == nullptr) {
    throw Error(ErrorCode::kMissingModel, handle.name() + " handle has no model");
  }
  return encode(text, *handle.model());
}

}  // namespace bnbpe
