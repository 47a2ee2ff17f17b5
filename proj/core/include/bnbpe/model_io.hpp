#pragma once

#include <iosfwd>
#include <string>

#include "bnbpe/bpe.hpp"

namespace bnbpe {

inline constexpr int kModelFormatVersion = 1;

// UTF-8 text layout:
//
//   format_version: 1
//   <key>: <value>           (header block)
//   [suffixes]
//   <lexicon entry>          (sorted)
//   [vocab]
//   <surface>\t<id>          (id order: specials, alphabet, merges)
//   [merges]
//   <left>\t<right>          (rank order)
//
// Surfaces never contain TAB or newline; the normalizer turns both into
// spaces and spaces never reach a symbol.
void write_model(const BpeModel& model, std::ostream& out);
void save_model(const BpeModel& model, const std::string& path);

// Every invariant is re-derived from the file contents; counts in the header
// are checked, never trusted. Errors: kVersionMismatch, kCorruptFile, kIo.
BpeModel read_model(std::istream& in);
BpeModel load_model(const std::string& path);

}  // namespace bnbpe
