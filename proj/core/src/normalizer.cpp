#include "bnbpe/normalizer.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cstdio>
#include <regex>
#include <sstream>

#include "bnbpe/errors.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/utf8.hpp"

namespace bnbpe {
namespace {

constexpr std::string_view kPipelineVersion = "norm-v1:web>nfkc>filter>collapse";
constexpr char32_t kVirama = 0x09CD;

bool is_numeral(char32_t cp) {
  const auto type = u_charType(static_cast<UChar32>(cp));
  return type == U_DECIMAL_DIGIT_NUMBER || type == U_OTHER_NUMBER || type == U_LETTER_NUMBER;
}

std::string hex4(char32_t cp) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%04X", static_cast<unsigned>(cp));
  return buf;
}

char32_t parse_cp(std::string_view s) {
  std::uint64_t v = 0;
  if (!parse_hex(s, v) || v > 0x10FFFF) {
    throw Error(ErrorCode::kInvalidArgument, "bad code point '" + std::string(s) + "'");
  }
  return static_cast<char32_t>(v);
}

// One filtering pass. Whitespace becomes U+0020; joiners survive only right
// after a virama that itself survived.
std::string filter_codepoints(std::string_view text, const NormalizationConfig& config) {
  std::string out;
  out.reserve(text.size());
  char32_t prev = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = next_codepoint(text, pos);
    bool keep = false;
    char32_t emitted = cp;
    if (u_isUWhiteSpace(static_cast<UChar32>(cp))) {
      keep = true;
      emitted = U' ';
    } else if (cp == kZeroWidthJoiner || cp == kZeroWidthNonJoiner) {
      keep = prev == kVirama;
    } else if (config.keep_punctuation.contains(cp)) {
      keep = true;
    } else if (config.retains(cp)) {
      keep = !(config.strip_numerals && is_numeral(cp));
    }
    if (keep) {
      append_utf8(out, emitted);
      prev = emitted;
    }
  }
  return out;
}

std::string collapse_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::set<char32_t> NormalizationConfig::default_punctuation() {
  return {0x0964, 0x0965, U'.', U',', U'!', U'?', U';', U':', U'\'', U'"', U'(', U')', U'-'};
}

void NormalizationConfig::validate() const {
  bool has_block = false;
  for (const auto& r : retain_ranges) {
    if (r.first > r.last) throw Error(ErrorCode::kInvalidArgument, "empty retain range");
    if (r.first <= kBengaliBlock.first && kBengaliBlock.last <= r.last) has_block = true;
  }
  if (!has_block) {
    throw Error(ErrorCode::kInvalidArgument, "retain_ranges must include U+0980-U+09FF");
  }
  for (char32_t cp : keep_punctuation) {
    for (const auto& r : retain_ranges) {
      if (r.contains(cp)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "punctuation U+" + hex4(cp) + " overlaps a retained range");
      }
    }
  }
}

bool NormalizationConfig::retains(char32_t cp) const {
  for (const auto& r : retain_ranges) {
    if (r.contains(cp)) return true;
  }
  return false;
}

std::string NormalizationConfig::canonical() const {
  std::ostringstream os;
  os << kPipelineVersion << ";nfkc=" << (apply_nfkc ? 1 : 0)
     << ";numerals=" << (strip_numerals ? "strip" : "keep")
     << ";web=" << (strip_web_artifacts ? "strip" : "keep") << ";retain=";
  for (std::size_t i = 0; i < retain_ranges.size(); ++i) {
    if (i) os << ',';
    os << hex4(retain_ranges[i].first) << '-' << hex4(retain_ranges[i].last);
  }
  os << ";keep=";
  bool first = true;
  for (char32_t cp : keep_punctuation) {
    if (!first) os << ',';
    first = false;
    os << hex4(cp);
  }
  return os.str();
}

std::uint64_t NormalizationConfig::fingerprint() const { return fnv1a64(canonical()); }

NormalizationConfig NormalizationConfig::from_canonical(std::string_view text) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kInvalidArgument,
                 "normalization config '" + std::string(text) + "': " + why);
  };
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    fields.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (fields.size() != 6 || fields[0] != kPipelineVersion) throw fail("unsupported layout");

  auto value_of = [&](std::string_view field, std::string_view key) {
    if (!field.starts_with(key) || field.size() <= key.size() || field[key.size()] != '=') {
      throw fail("expected key '" + std::string(key) + "'");
    }
    return field.substr(key.size() + 1);
  };
  auto split = [](std::string_view s) {
    std::vector<std::string_view> parts;
    std::size_t b = 0;
    while (b < s.size()) {
      auto e = s.find(',', b);
      if (e == std::string_view::npos) e = s.size();
      parts.push_back(s.substr(b, e - b));
      b = e + 1;
    }
    return parts;
  };

  NormalizationConfig config;
  config.apply_nfkc = value_of(fields[1], "nfkc") == "1";
  config.strip_numerals = value_of(fields[2], "numerals") == "strip";
  config.strip_web_artifacts = value_of(fields[3], "web") == "strip";
  config.retain_ranges.clear();
  for (auto part : split(value_of(fields[4], "retain"))) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) throw fail("bad range");
    config.retain_ranges.push_back({parse_cp(part.substr(0, dash)), parse_cp(part.substr(dash + 1))});
  }
  config.keep_punctuation.clear();
  const auto keep = fields[5].substr(0, 5) == "keep=" ? fields[5].substr(5) : throw fail("expected keep");
  for (auto part : split(keep)) config.keep_punctuation.insert(parse_cp(part));
  config.validate();
  return config;
}

NormalizedText NormalizedText::adopt(std::string content, std::uint64_t fingerprint) {
  NormalizedText t;
  t.source_length_ = count_codepoints(content);
  t.content_ = std::move(content);
  t.fingerprint_ = fingerprint;
  return t;
}

std::string normalize_unicode(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kIo, "ICU NFKC data unavailable");
  const auto input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (nfkc->isNormalized(input, status) && U_SUCCESS(status)) {
    // Still round-trip through ICU so ill-formed UTF-8 becomes U+FFFD.
    std::string out;
    input.toUTF8String(out);
    return out;
  }
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfkc->normalize(input, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidArgument, "NFKC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_emoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0x2B50 && cp <= 0x2B55) ||
         (cp >= 0x231A && cp <= 0x231B) || (cp >= 0x23E9 && cp <= 0x23FA) ||
         (cp >= 0xE0020 && cp <= 0xE007F);
}

std::string strip_web_artifacts(std::string_view text) {
  static const std::regex kTag(R"(<[^>]*>)");
  static const std::regex kUrl(R"((https?://|www\.)\S*)", std::regex::icase);

  std::string s(text);
  if (s.find('<') != std::string::npos) s = std::regex_replace(s, kTag, " ");
  if (s.find("://") != std::string::npos || s.find("www.") != std::string::npos ||
      s.find("WWW.") != std::string::npos) {
    s = std::regex_replace(s, kUrl, " ");
  }

  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t begin = pos;
    const char32_t cp = next_codepoint(s, pos);
    if (!is_emoji(cp)) out.append(s, begin, pos - begin);
  }
  return out;
}

NormalizedText clean(std::string_view text, const NormalizationConfig& config) {
  NormalizedText result;
  result.source_length_ = count_codepoints(text);
  result.fingerprint_ = config.fingerprint();

  std::string s = config.strip_web_artifacts ? strip_web_artifacts(text) : std::string(text);
  // Dropping a code point can leave two marks adjacent that NFKC would
  // compose or reorder, so filtering and NFKC alternate until neither changes
  // the text. That keeps clean() idempotent.
  for (int round = 0; round < 8; ++round) {
    if (config.apply_nfkc) s = normalize_unicode(s);
    std::string filtered = filter_codepoints(s, config);
    if (filtered == s) break;
    s = std::move(filtered);
    if (!config.apply_nfkc) break;
  }
  result.content_ = collapse_spaces(s);
  return result;
}

}  // namespace bnbpe
