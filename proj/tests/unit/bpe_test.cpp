#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "bnbpe/bpe.hpp"
#include "bnbpe/grapheme.hpp"
#include "bnbpe/model_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace bnbpe {
namespace {

using testing::error_code_of;

std::vector<NormalizedText> repeat(const std::vector<std::pair<std::string, int>>& words) {
  std::vector<NormalizedText> out;
  for (const auto& [w, n] : words) {
    for (int i = 0; i < n; ++i) out.push_back(clean(w, {}));
  }
  return out;
}

ConstraintProfile generic_profile() { return {ConstraintMode::kGeneric, {}}; }
ConstraintProfile bengali_profile() { return {ConstraintMode::kBengali, default_suffix_lexicon()}; }

TrainingOptions options_for(ConstraintProfile profile, std::size_t vocab, std::size_t threads = 1) {
  TrainingOptions o;
  o.profile = std::move(profile);
  o.target_vocab_size = vocab;
  o.threads = threads;
  return o;
}

std::string model_bytes(const BpeModel& m) {
  std::ostringstream os;
  write_model(m, os);
  return os.str();
}

const BpeModel& sample_model(ConstraintMode mode) {
  static const BpeModel bengali = train(testing::sample_corpus(), options_for(bengali_profile(), 8000), {});
  static const BpeModel generic = train(testing::sample_corpus(), options_for(generic_profile(), 8000), {});
  return mode == ConstraintMode::kBengali ? bengali : generic;
}

TEST(Train, ToyCorpusMergesByWordFrequency) {
  const auto corpus = repeat({{"কলম", 2}, {"কলা", 1}});
  const auto model = train(corpus, options_for(generic_profile(), 100), {});
  ASSERT_EQ(model.merges().size(), 2u);
  EXPECT_EQ(model.merges()[0].left, "ক");
  EXPECT_EQ(model.merges()[0].right, "ল");
  EXPECT_EQ(model.merges()[0].frequency_at_merge, 2u);
  EXPECT_EQ(model.merges()[1].left, "কল");
  EXPECT_EQ(model.merges()[1].right, "ম");
  EXPECT_EQ(model.alphabet(), (std::vector<std::string>{"ক", "ম", "ল", "লা"}));

  EXPECT_EQ(encode(clean("কলা", {}), model).surfaces(), (std::vector<std::string>{"ক", "লা"}));
  EXPECT_EQ(encode(clean("কলম", {}), model).surfaces(), (std::vector<std::string>{"কলম"}));
}

TEST(Train, MinPairFrequencyOneAllowsSingletons) {
  auto options = options_for(generic_profile(), 100);
  options.min_pair_freq = 1;
  const auto model = train(repeat({{"কলম", 2}, {"কলা", 1}}), options, {});
  ASSERT_EQ(model.merges().size(), 3u);
  EXPECT_EQ(model.merges()[2].merged(), "কলা");
}

TEST(Train, StopsExactlyAtTarget) {
  const auto model = train(testing::sample_corpus(), options_for(generic_profile(), 700), {});
  EXPECT_EQ(model.alphabet().size() + model.merges().size(), 700u);
  EXPECT_EQ(model.vocab_size(), 702u);
}

TEST(Encode, UnknownGraphemesKeepSurface) {
  const auto model = train(repeat({{"কলম", 2}, {"কলা", 1}}), options_for(generic_profile(), 100), {});
  const auto seq = encode(clean("কলমা ঔ", {}), model);
  EXPECT_EQ(seq.surfaces(), (std::vector<std::string>{"কল", "মা", "ঔ"}));
  EXPECT_EQ(seq.tokens[1].id, kUnkId);
  EXPECT_EQ(seq.tokens[2].id, kUnkId);
  EXPECT_EQ(seq.word_boundaries, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(decode(seq), "কলমা ঔ");
}

TEST(Encode, FingerprintMismatchRejected) {
  const auto& model = sample_model(ConstraintMode::kGeneric);
  NormalizationConfig other;
  other.strip_numerals = false;
  EXPECT_EQ(error_code_of([&] { encode(clean("বাংলা", other), model); }),
            ErrorCode::kFingerprintMismatch);
}

TEST(MergeConstraints, SuffixStackRule) {
  const auto p = bengali_profile();
  const MergeContext final{true, false};
  const MergeContext mid{false, false};
  EXPECT_FALSE(is_merge_allowed("ভাষী", "রা", final, p));
  EXPECT_TRUE(is_merge_allowed("ভাষী", "রা", final, generic_profile()));
  EXPECT_FALSE(is_merge_allowed("ভাষাভাষী", "রা", final, p));
  EXPECT_TRUE(is_merge_allowed("ভাষাভাষী", "রা", mid, p));
  EXPECT_TRUE(is_merge_allowed("গুলো", "র", final, p));
  EXPECT_TRUE(is_merge_allowed("ভাষা", "ভাষী", final, p));
  EXPECT_FALSE(is_merge_allowed("ছেলে", "দের", final, p));
  // A suffix hidden inside the right operand is still caught.
  EXPECT_FALSE(is_merge_allowed("ছে", "লেদের", final, p));
  EXPECT_TRUE(is_merge_allowed("ভাষাভাষী", "রা", final, generic_profile()));
}

TEST(MergeConstraints, UniversalRules) {
  for (const auto& p : {bengali_profile(), generic_profile()}) {
    EXPECT_FALSE(is_merge_allowed("ক", "ল", {false, true}, p));
    EXPECT_FALSE(is_merge_allowed("\xE0\xA6\xBF", "ক", {false, false}, p));  // U+09BF first
    EXPECT_FALSE(is_merge_allowed("", "ক", {false, false}, p));
    EXPECT_TRUE(is_merge_allowed(Symbol{"ক", 5}, Symbol{"ল", 6}, {false, false}, p));
  }
}

TEST(SuffixLexicon, DataFileMatchesBuiltIn) {
  EXPECT_EQ(load_suffix_lexicon(testing::data_path("suffixes_bn.txt"), {}), default_suffix_lexicon());
  EXPECT_EQ(default_suffix_lexicon().size(), 24u);
  EXPECT_EQ(error_code_of([] { load_suffix_lexicon("/nonexistent/lexicon.txt", {}); }),
            ErrorCode::kIo);
}

TEST(SuffixLexicon, StackRecognition) {
  const auto p = bengali_profile();
  EXPECT_TRUE(p.is_suffix_stack("গুলোর"));
  EXPECT_TRUE(p.is_suffix_stack("রা"));
  EXPECT_TRUE(p.is_suffix_stack("টাই"));
  EXPECT_FALSE(p.is_suffix_stack("ভাষা"));
  EXPECT_FALSE(p.is_suffix_stack(""));
}

TEST(Pretokenize, SplitsOnSpacesAndPunctuation) {
  const auto units = pretokenize(std::string_view("কি? হ্যাঁ ভালো।"));
  std::vector<std::string> texts;
  std::vector<bool> starts;
  for (const auto& u : units) {
    texts.emplace_back(u.text);
    starts.push_back(u.starts_word);
  }
  EXPECT_EQ(texts, (std::vector<std::string>{"কি", "?", "হ্যাঁ", "ভালো", "।"}));
  EXPECT_EQ(starts, (std::vector<bool>{true, false, true, true, false}));
  EXPECT_TRUE(pretokenize(std::string_view("")).empty());
  const auto lead = pretokenize(std::string_view("(ক)"));
  ASSERT_EQ(lead.size(), 3u);
  EXPECT_TRUE(lead[0].starts_word);
  EXPECT_FALSE(lead[1].starts_word);
}

TEST(Decode, JoinsWithinWordsAndSpacesBetween) {
  TokenSequence seq;
  seq.tokens = {{"বাং", 3}, {"লা", 4}, {"ভা", 5}, {"ষা", 6}, {"।", 7}};
  seq.word_boundaries = {0, 2};
  EXPECT_EQ(decode(seq), "বাংলা ভাষা।");
  EXPECT_EQ(decode(TokenSequence{}), "");
}

TEST(Decode, IdsRoundTripThroughModel) {
  const auto& model = sample_model(ConstraintMode::kBengali);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& text = testing::sample_corpus()[i];
    const auto seq = encode(text, model);
    const auto ids = seq.ids();
    EXPECT_EQ(tokens_from_ids(ids, seq.word_boundaries, model), seq);
  }
  const std::int32_t bogus[] = {999999};
  const std::size_t starts[] = {0};
  EXPECT_EQ(decode(tokens_from_ids(bogus, starts, model)), "<unk>");
}

TEST(Encode, RoundTripsSampleCorpus) {
  for (auto mode : {ConstraintMode::kBengali, ConstraintMode::kGeneric}) {
    for (const auto& text : testing::sample_corpus()) {
      ASSERT_EQ(decode(encode(text, sample_model(mode))), text.content());
    }
  }
}

TEST(Encode, MatchesBruteForceOracle) {
  for (auto mode : {ConstraintMode::kBengali, ConstraintMode::kGeneric}) {
    const auto& model = sample_model(mode);
    for (std::size_t i = 0; i < testing::sample_corpus().size(); i += 7) {
      const auto& text = testing::sample_corpus()[i];
      ASSERT_EQ(encode(text, model).surfaces(), oracle::brute_encode(text, model)) << text.content();
    }
  }
}

TEST(Encode, FuzzedTextRoundTripsAndMatchesOracle) {
  const auto& model = sample_model(ConstraintMode::kBengali);
  std::mt19937_64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    const auto text = clean(testing::random_raw_text(rng, 30), {});
    const auto seq = encode(text, model);
    ASSERT_EQ(decode(seq), text.content());
    ASSERT_EQ(seq.surfaces(), oracle::brute_encode(text, model));
  }
}

TEST(Encode, MoreMergesNeverIncreaseTokenCount) {
  const auto& full = sample_model(ConstraintMode::kGeneric);
  std::size_t previous = SIZE_MAX;
  for (std::size_t k : {std::size_t{0}, std::size_t{50}, std::size_t{200}, std::size_t{800},
                        full.merges().size()}) {
    const auto model = full.truncated(k);
    std::size_t total = 0;
    for (const auto& text : testing::sample_corpus()) total += encode(text, model).size();
    EXPECT_LE(total, previous) << "k=" << k;
    previous = total;
  }
}

TEST(Train, MatchesSlowReferenceTrainer) {
  const std::vector<NormalizedText> subset(testing::sample_corpus().begin(),
                                           testing::sample_corpus().begin() + 400);
  for (auto profile : {bengali_profile(), generic_profile()}) {
    const auto options = options_for(profile, 500);
    const auto fast = train(subset, options, {});
    const auto slow = oracle::slow_train(subset, options);
    ASSERT_EQ(fast.alphabet(), slow.alphabet);
    ASSERT_EQ(fast.merges().size(), slow.merges.size());
    for (std::size_t i = 0; i < slow.merges.size(); ++i) {
      ASSERT_EQ(fast.merges()[i].left, slow.merges[i].left) << "rank " << i;
      ASSERT_EQ(fast.merges()[i].right, slow.merges[i].right) << "rank " << i;
      ASSERT_EQ(fast.merges()[i].frequency_at_merge, slow.merges[i].frequency_at_merge);
    }
  }
}

TEST(Train, VocabularyAccounting) {
  const auto& model = sample_model(ConstraintMode::kBengali);
  EXPECT_EQ(model.vocab_size(), kFirstSymbolId + model.alphabet().size() + model.merges().size());
  EXPECT_EQ(model.surface_of(kUnkId), kUnkSurface);
  EXPECT_EQ(model.surface_of(kPadId), kPadSurface);
  for (std::size_t i = 0; i < model.alphabet().size(); ++i) {
    EXPECT_EQ(model.id_of(model.alphabet()[i]), static_cast<std::int32_t>(kFirstSymbolId + i));
  }
  std::set<std::string> seen;
  for (const auto& rule : model.merges()) {
    const auto id = model.id_of(rule.merged());
    ASSERT_TRUE(id.has_value());
    EXPECT_EQ(*id, model.first_merge_id() + static_cast<std::int32_t>(rule.rank));
    EXPECT_TRUE(seen.insert(rule.merged()).second);
    EXPECT_GE(rule.frequency_at_merge, model.min_pair_freq());
    EXPECT_FALSE(starts_with_combining_mark(rule.merged()));
  }
}

TEST(Train, DeterministicAcrossThreadCounts) {
  for (auto profile : {bengali_profile(), generic_profile()}) {
    const auto one = model_bytes(train(testing::sample_corpus(), options_for(profile, 1500, 1), {}));
    const auto four = model_bytes(train(testing::sample_corpus(), options_for(profile, 1500, 4), {}));
    const auto again = model_bytes(train(testing::sample_corpus(), options_for(profile, 1500, 1), {}));
    EXPECT_EQ(one, four);
    EXPECT_EQ(one, again);
  }
}

TEST(Train, BengaliModelKeepsSuffixesSeparate) {
  const auto& model = sample_model(ConstraintMode::kBengali);
  const auto& profile = model.profile();
  std::size_t audited = 0;
  for (const auto& text : testing::sample_corpus()) {
    for (const auto& unit : pretokenize(text)) {
      std::vector<Token> tokens;
      encode_unit(unit.text, model, tokens);
      const auto& last = tokens.back().surface;
      if (profile.is_suffix_stack(last)) continue;
      const auto spans = cluster_spans(last);
      for (std::size_t i = 1; i < spans.size(); ++i) {
        ASSERT_FALSE(profile.is_suffix_stack(std::string_view(last).substr(spans[i].offset)))
            << last << " in " << unit.text;
      }
      ++audited;
    }
  }
  EXPECT_GT(audited, 1000u);

  const auto seq = encode(clean("ভাষাভাষীরা", {}), model);
  ASSERT_GE(seq.size(), 2u);
  EXPECT_EQ(seq.tokens.back().surface, "রা");
}

TEST(Train, GenericModelDoesFuseSuffixes) {
  // Sanity check that the audit above is not vacuous.
  const auto& model = sample_model(ConstraintMode::kGeneric);
  const auto& lexicon = bengali_profile();
  std::size_t fused = 0;
  for (const auto& rule : model.merges()) {
    if (lexicon.is_suffix_stack(rule.right) && !lexicon.is_suffix_stack(rule.merged())) ++fused;
  }
  EXPECT_GT(fused, 0u);
}

TEST(Train, Errors) {
  const std::vector<NormalizedText> none;
  EXPECT_EQ(error_code_of([&] { train(none, {}, {}); }), ErrorCode::kEmptyCorpus);
  const auto blanks = testing::normalize_all({"", "123 abc"});
  EXPECT_EQ(error_code_of([&] { train(blanks, {}, {}); }), ErrorCode::kEmptyCorpus);
  const auto tiny = testing::normalize_all({"কলম কলা"});
  EXPECT_EQ(error_code_of([&] { train(tiny, options_for(generic_profile(), 4), {}); }),
            ErrorCode::kTargetTooSmall);
  NormalizationConfig other;
  other.strip_numerals = false;
  const auto mismatched = testing::normalize_all({"কলম"}, other);
  EXPECT_EQ(error_code_of([&] { train(mismatched, {}, {}); }), ErrorCode::kFingerprintMismatch);
}

TEST(BpeModel, AssembleRejectsBrokenInvariants) {
  const ConstraintProfile p = generic_profile();
  auto code = [&](std::vector<std::string> alphabet, std::vector<MergeRule> merges, std::size_t target) {
    return error_code_of([&] { BpeModel::assemble(alphabet, merges, p, target, 2, {}); });
  };
  EXPECT_EQ(code({"ক", "ক"}, {}, 10), ErrorCode::kCorruptFile);
  EXPECT_EQ(code({"কল"}, {}, 10), ErrorCode::kCorruptFile);
  EXPECT_EQ(code({"ক", "ল"}, {{"ক", "ম", 0, 2}}, 10), ErrorCode::kCorruptFile);
  EXPECT_EQ(code({"ক", "ল"}, {{"ক", "ল", 1, 2}}, 10), ErrorCode::kCorruptFile);
  EXPECT_EQ(code({"ক", "ল"}, {{"ক", "ল", 0, 2}}, 2), ErrorCode::kCorruptFile);
  EXPECT_EQ(code({"ক", "ল"}, {{"ক", "ল", 0, 2}}, 3), std::nullopt);
}

}  // namespace
}  // namespace bnbpe
