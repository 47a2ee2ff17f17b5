#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bnbpe/normalizer.hpp"

namespace bnbpe {

enum class CodepointClass {
  kIndependentVowel,
  kConsonant,
  kDependentVowelSign,
  kVirama,
  kNukta,
  kModifier,  // candrabindu, anusvara, visarga
  kJoiner,    // ZWNJ, ZWJ
  kPunctuation,
  kSpace,
  kOther,
};

const char* to_string(CodepointClass cls);

CodepointClass classify_codepoint(char32_t cp);

// Marks that may never open a well-formed cluster or a BPE symbol.
bool is_combining_class(CodepointClass cls);
bool starts_with_combining_mark(std::string_view text);

// One orthographic unit:
//   (IndependentVowel | Consonant Nukta? (Virama Joiner? Consonant Nukta?)* DependentVowelSign?) Modifier*
// Space, punctuation and other code points are singleton clusters. A mark
// that the grammar cannot place is appended to the preceding letter cluster,
// or opens an empty-base cluster after a space, punctuation or at the start;
// either way the cluster is flagged degenerate.
struct GraphemeCluster {
  std::u32string codepoints;
  std::string surface;
  bool degenerate = false;
};

// Byte spans of each cluster within `text`. Concatenating them reproduces
// `text` exactly.
struct ClusterSpan {
  std::size_t offset;
  std::size_t length;
  bool degenerate;
};
std::vector<ClusterSpan> cluster_spans(std::string_view text);

// Cluster surfaces as views into `text`.
std::vector<std::string_view> split_graphemes(std::string_view text);

std::vector<GraphemeCluster> segment_graphemes(std::string_view text);
std::vector<GraphemeCluster> segment_graphemes(const NormalizedText& text);

}  // namespace bnbpe
