#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bnbpe/bpe.hpp"

namespace bnbpe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. "-" as a path means `in` or `out`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

// Marks the first token of each word in `encode` output.
inline constexpr std::string_view kWordMark = "▁";

// Surfaces: tokens separated by spaces, each word's first token prefixed with
// kWordMark. Ids: tokens separated by spaces, words by " | ".
std::string format_token_line(const TokenSequence& tokens, bool ids);

// Inverse of format_token_line. Lines starting with kWordMark are surfaces;
// anything else non-empty is ids and needs `model`. Surface tokens get their
// model id when `model` is given, kNoVocabId otherwise. Throws
// kInvalidArgument on malformed lines.
TokenSequence parse_token_line(std::string_view line, const BpeModel* model);

}  // namespace bnbpe::cli
