#include <gtest/gtest.h>

#include <random>

#include "bnbpe/grapheme.hpp"
#include "bnbpe/utf8.hpp"
#include "fixtures.hpp"

namespace bnbpe {
namespace {

using C = CodepointClass;

std::vector<std::string> surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (auto s : split_graphemes(text)) out.emplace_back(s);
  return out;
}

TEST(ClassifyCodepoint, BlockLayout) {
  EXPECT_EQ(classify_codepoint(0x09CD), C::kVirama);
  EXPECT_EQ(classify_codepoint(0x09BF), C::kDependentVowelSign);
  EXPECT_EQ(classify_codepoint(U' '), C::kSpace);
  EXPECT_EQ(classify_codepoint(0x09BC), C::kNukta);
  EXPECT_EQ(classify_codepoint(0x09D7), C::kDependentVowelSign);
  EXPECT_EQ(classify_codepoint(0x0964), C::kPunctuation);
  EXPECT_EQ(classify_codepoint(U'?'), C::kPunctuation);
  EXPECT_EQ(classify_codepoint(0x200D), C::kJoiner);
  EXPECT_EQ(classify_codepoint(U'a'), C::kOther);
  EXPECT_EQ(classify_codepoint(0x09E6), C::kOther);  // Bengali digit zero
  for (char32_t cp = 0x0981; cp <= 0x0983; ++cp) EXPECT_EQ(classify_codepoint(cp), C::kModifier);
  for (char32_t cp = 0x0985; cp <= 0x0994; ++cp) {
    if (cp == 0x098D || cp == 0x098E || cp == 0x0991 || cp == 0x0992) continue;  // unassigned
    EXPECT_EQ(classify_codepoint(cp), C::kIndependentVowel) << std::hex << static_cast<unsigned>(cp);
  }
  for (char32_t cp = 0x0995; cp <= 0x09B9; ++cp) {
    if (cp == 0x09A9 || cp == 0x09B1 || (cp >= 0x09B3 && cp <= 0x09B5)) continue;
    EXPECT_EQ(classify_codepoint(cp), C::kConsonant) << std::hex << static_cast<unsigned>(cp);
  }
  for (char32_t cp : {0x09DC, 0x09DD, 0x09DF, 0x09F0, 0x09F1}) {
    EXPECT_EQ(classify_codepoint(cp), C::kConsonant);
  }
  for (char32_t cp = 0x09BE; cp <= 0x09CC; ++cp) {
    if (cp == 0x09C5 || cp == 0x09C6 || cp == 0x09C9 || cp == 0x09CA) continue;
    EXPECT_EQ(classify_codepoint(cp), C::kDependentVowelSign) << std::hex << static_cast<unsigned>(cp);
  }
}

TEST(ClassifyCodepoint, TotalOverNormalizerOutputAlphabet) {
  for (char32_t cp = 0x0980; cp <= 0x09FF; ++cp) {
    const auto cls = classify_codepoint(cp);
    EXPECT_NE(cls, C::kSpace);
    EXPECT_NE(cls, C::kPunctuation);
  }
}

TEST(SegmentGraphemes, ConjunctWithKarStaysWhole) {
  EXPECT_EQ(surfaces("গর্বিত"), (std::vector<std::string>{"গ", "র্বি", "ত"}));
}

TEST(SegmentGraphemes, KarBindsToBase) {
  EXPECT_EQ(surfaces("ভাষী"), (std::vector<std::string>{"ভা", "ষী"}));
}

TEST(SegmentGraphemes, IndependentVowelAlone) {
  EXPECT_EQ(surfaces("এ"), (std::vector<std::string>{"এ"}));
}

TEST(SegmentGraphemes, TripleConjunctChainsIntoOneCluster) {
  EXPECT_EQ(surfaces("মন্ত্রী"), (std::vector<std::string>{"ম", "ন্ত্রী"}));
}

TEST(SegmentGraphemes, ModifiersBindToPrecedingCluster) {
  EXPECT_EQ(surfaces("বাংলা"), (std::vector<std::string>{"বাং", "লা"}));
  EXPECT_EQ(surfaces("চাঁদ"), (std::vector<std::string>{"চাঁ", "দ"}));
  EXPECT_EQ(surfaces("আঃ"), (std::vector<std::string>{"আঃ"}));
}

TEST(SegmentGraphemes, NuktaAndJoinerInsideCluster) {
  const auto nukta = encode_utf8(U"ড়ি");  // ড + nukta + ি
  EXPECT_EQ(surfaces(nukta), (std::vector<std::string>{nukta}));
  const auto zwj = encode_utf8(U"ক্‍ষ");
  EXPECT_EQ(surfaces(zwj), (std::vector<std::string>{zwj}));
}

TEST(SegmentGraphemes, SpacesAndPunctuationAreSingletons) {
  EXPECT_EQ(surfaces("কি। খা"), (std::vector<std::string>{"কি", "।", " ", "খা"}));
  EXPECT_EQ(surfaces("(ক)"), (std::vector<std::string>{"(", "ক", ")"}));
}

TEST(SegmentGraphemes, StrayMarksAreDegenerateNotErrors) {
  const auto leading = segment_graphemes(std::string_view("িক"));
  ASSERT_EQ(leading.size(), 2u);
  EXPECT_TRUE(leading[0].degenerate);
  EXPECT_EQ(leading[0].surface, "ি");
  EXPECT_FALSE(leading[1].degenerate);

  // A second kar joins the cluster it follows.
  const auto doubled = segment_graphemes(std::string_view("কিি"));
  ASSERT_EQ(doubled.size(), 1u);
  EXPECT_TRUE(doubled[0].degenerate);

  // After a space there is no base to attach to.
  const auto spaced = segment_graphemes(std::string_view("ক ি"));
  ASSERT_EQ(spaced.size(), 3u);
  EXPECT_TRUE(spaced[2].degenerate);
}

TEST(SegmentGraphemes, ViramaAfterIndependentVowelIsAbsorbed) {
  const auto clusters = segment_graphemes(encode_utf8(U"\u0985\u09CD\u09AF\u09BE\u09AA"));
  ASSERT_EQ(clusters.size(), 3u);
  EXPECT_EQ(clusters[0].surface, encode_utf8(U"\u0985\u09CD"));
  EXPECT_TRUE(clusters[0].degenerate);
  EXPECT_EQ(clusters[1].surface, encode_utf8(U"\u09AF\u09BE"));
  EXPECT_FALSE(clusters[1].degenerate);
}

TEST(SegmentGraphemes, EmptyInput) { EXPECT_TRUE(segment_graphemes(std::string_view("")).empty()); }

void expect_well_formed(const GraphemeCluster& c) {
  ASSERT_FALSE(c.codepoints.empty());
  ASSERT_FALSE(is_combining_class(classify_codepoint(c.codepoints.front()))) << c.surface;
  int kars = 0;
  for (std::size_t i = 0; i < c.codepoints.size(); ++i) {
    const auto cls = classify_codepoint(c.codepoints[i]);
    if (cls == C::kDependentVowelSign) ++kars;
    if (cls == C::kVirama) {
      ASSERT_GT(i, 0u);
      const auto before = classify_codepoint(c.codepoints[i - 1]);
      ASSERT_TRUE(before == C::kConsonant || before == C::kNukta) << c.surface;
      ASSERT_LT(i + 1, c.codepoints.size()) << c.surface;
      auto after = classify_codepoint(c.codepoints[i + 1]);
      if (after == C::kJoiner) {
        ASSERT_LT(i + 2, c.codepoints.size());
        after = classify_codepoint(c.codepoints[i + 2]);
      }
      ASSERT_EQ(after, C::kConsonant) << c.surface;
    }
  }
  ASSERT_LE(kars, 1) << c.surface;
}

TEST(SegmentGraphemes, FuzzedTextIsLosslessAndWellFormed) {
  std::mt19937_64 rng(2024);
  std::size_t degenerate = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto text = clean(testing::random_raw_text(rng, 32), {});
    const auto clusters = segment_graphemes(text);
    std::string joined;
    for (const auto& c : clusters) {
      joined += c.surface;
      if (c.degenerate) {
        ++degenerate;
        continue;
      }
      expect_well_formed(c);
    }
    ASSERT_EQ(joined, text.content());
    ASSERT_EQ(segment_graphemes(text).size(), clusters.size());
  }
  // Random soups are full of stray marks; the fuzz must have exercised them.
  EXPECT_GT(degenerate, 0u);
}

TEST(SegmentGraphemes, SampleCorpusHasNoClusterStartingWithMark) {
  std::size_t clusters = 0;
  std::size_t degenerate = 0;
  for (const auto& text : testing::sample_corpus()) {
    for (const auto& c : segment_graphemes(text)) {
      ++clusters;
      ASSERT_FALSE(is_combining_class(classify_codepoint(c.codepoints.front()))) << c.surface;
      // Loanword spellings such as the a-phala in U+0985 U+09CD U+09AF
      // leave a virama on an independent vowel; those stay degenerate.
      if (c.degenerate) {
        ++degenerate;
        continue;
      }
      expect_well_formed(c);
    }
  }
  EXPECT_GT(clusters, 10000u);
  EXPECT_LT(degenerate * 100, clusters);
}

}  // namespace
}  // namespace bnbpe
