#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bnbpe {

struct CodepointRange {
  char32_t first;
  char32_t last;

  bool contains(char32_t cp) const { return first <= cp && cp <= last; }
  friend bool operator==(const CodepointRange&, const CodepointRange&) = default;
};

inline constexpr CodepointRange kBengaliBlock{0x0980, 0x09FF};
inline constexpr char32_t kZeroWidthNonJoiner = 0x200C;
inline constexpr char32_t kZeroWidthJoiner = 0x200D;

struct NormalizationConfig {
  bool apply_nfkc = true;
  std::vector<CodepointRange> retain_ranges{kBengaliBlock};
  std::set<char32_t> keep_punctuation = default_punctuation();
  bool strip_numerals = true;
  bool strip_web_artifacts = true;

  // Dandas (U+0964, U+0965) plus . , ! ? ; : ' " ( ) -
  static std::set<char32_t> default_punctuation();

  // Throws kInvalidArgument if the Bengali block is not retained or a
  // punctuation code point overlaps a retained range.
  void validate() const;

  bool retains(char32_t cp) const;

  // Stable textual form; includes the pipeline version, so any change to the
  // cleaning steps changes every fingerprint.
  std::string canonical() const;
  std::uint64_t fingerprint() const;

  // Inverse of canonical(); throws kInvalidArgument on malformed input.
  static NormalizationConfig from_canonical(std::string_view text);

  friend bool operator==(const NormalizationConfig&, const NormalizationConfig&) = default;
};

// Output of clean(). Only clean() (or adopt() for trusted, already-normalized
// content such as model files) can produce one, so holding a NormalizedText
// means the content went through the pipeline identified by fingerprint().
class NormalizedText {
 public:
  NormalizedText() = default;

  const std::string& content() const { return content_; }
  std::size_t source_length() const { return source_length_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  bool empty() const { return content_.empty(); }

  // Wraps content that is already known to be a fixed point of the pipeline
  // with this fingerprint. No re-validation is done.
  static NormalizedText adopt(std::string content, std::uint64_t fingerprint);

 private:
  friend NormalizedText clean(std::string_view, const NormalizationConfig&);

  std::string content_;
  std::size_t source_length_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// NFKC via ICU.
std::string normalize_unicode(std::string_view text);

// Removes HTML tags, scheme-prefixed URLs and emoji.
std::string strip_web_artifacts(std::string_view text);

bool is_emoji(char32_t cp);

// web-artifact stripping -> NFKC -> character filtering -> whitespace collapse.
NormalizedText clean(std::string_view text, const NormalizationConfig& config);

}  // namespace bnbpe
