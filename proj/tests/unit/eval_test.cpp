#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "bnbpe/eval.hpp"
#include "fixtures.hpp"

namespace bnbpe {
namespace {

using testing::error_code_of;

SparseVector dense_to_sparse(const std::vector<double>& x) {
  SparseVector v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) {
      v.indices.push_back(static_cast<std::uint32_t>(j));
      v.values.push_back(x[j]);
    }
  }
  return v;
}

// Dense re-derivation of the objective straight from its definition.
double dense_objective(const std::vector<std::vector<double>>& X, const std::vector<std::size_t>& y,
                       std::size_t K, double C, const std::vector<double>& W,
                       const std::vector<double>& b) {
  const std::size_t D = X.empty() ? 0 : X[0].size();
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    std::vector<double> z(K);
    for (std::size_t k = 0; k < K; ++k) {
      z[k] = b[k];
      for (std::size_t j = 0; j < D; ++j) z[k] += W[k * D + j] * X[i][j];
    }
    double denom = 0.0;
    for (double v : z) denom += std::exp(v);
    loss -= z[y[i]] - std::log(denom);
  }
  double sq = 0.0;
  for (double w : W) sq += w * w;
  return loss + sq / (2.0 * C);
}

struct Problem {
  std::vector<std::vector<double>> dense;
  SparseMatrix X;
  std::vector<std::size_t> y;
  std::size_t K = 3;
  std::size_t D = 6;
};

Problem random_problem(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution present(0.5);
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(p.D, 0.0);
    for (auto& v : row) {
      if (present(rng)) v = value(rng);
    }
    p.dense.push_back(row);
    p.X.push_back(dense_to_sparse(row));
    p.y.push_back(i % p.K);
  }
  return p;
}

double f1_oracle(const std::vector<std::size_t>& t, const std::vector<std::size_t>& p) {
  std::set<std::size_t> classes(t.begin(), t.end());
  double sum = 0.0;
  for (auto c : classes) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (p[i] == c && t[i] == c) ++tp;
      if (p[i] == c && t[i] != c) ++fp;
      if (p[i] != c && t[i] == c) ++fn;
    }
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    sum += precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
  }
  return sum / static_cast<double>(classes.size());
}

// Three classes with disjoint vocabularies.
LabeledCorpus separable_corpus(std::size_t per_class = 30) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> classes = {
      {"sport", {"খেলা", "গোল", "মাঠ", "দল", "জয়", "ব্যাট"}},
      {"politics", {"সংসদ", "ভোট", "মন্ত্রী", "দলীয়", "নির্বাচন", "সরকার"}},
      {"science", {"গবেষণা", "বিজ্ঞান", "পরীক্ষা", "কোষ", "তারা", "গ্রহ"}},
  };
  std::mt19937_64 rng(11);
  std::vector<RawSample> raw;
  for (const auto& [label, words] : classes) {
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (std::size_t i = 0; i < per_class; ++i) {
      std::string text;
      for (int w = 0; w < 5; ++w) text += (w ? " " : "") + words[pick(rng)];
      raw.push_back({clean(text, {}), label, raw.size() + 2});
    }
  }
  return stratified_split(std::move(raw));
}

TEST(TfIdf, ToyVocabularyAndWeights) {
  const std::vector<TokenDoc> docs = {{"a", "b"}, {"a", "b"}, {"a", "c"}};
  const auto vec = TfIdfVectorizer::fit(docs);
  EXPECT_EQ(vec.feature_count(), 3u);
  ASSERT_GE(vec.index_of("a"), 0);
  ASSERT_GE(vec.index_of("b"), 0);
  ASSERT_GE(vec.index_of("a b"), 0);
  EXPECT_EQ(vec.index_of("c"), -1);  // df 1 < min_df
  EXPECT_EQ(vec.document_count(), 3u);
  // df == N gives ln(1) + 1.
  EXPECT_DOUBLE_EQ(vec.idf()[vec.index_of("a")], 1.0);
  const double idf_b = std::log(4.0 / 3.0) + 1.0;
  EXPECT_NEAR(vec.idf()[vec.index_of("b")], idf_b, 1e-15);

  const auto x = vec.transform(TokenDoc{"a", "a", "b"});
  // counts: a 2, b 1, "a b" 1; "a a" is not a feature.
  const double norm = std::sqrt(4.0 + 2.0 * idf_b * idf_b);
  std::map<std::int64_t, double> got;
  for (std::size_t k = 0; k < x.nnz(); ++k) got[x.indices[k]] = x.values[k];
  ASSERT_EQ(got.size(), 3u);
  EXPECT_NEAR(got[vec.index_of("a")], 2.0 / norm, 1e-12);
  EXPECT_NEAR(got[vec.index_of("b")], idf_b / norm, 1e-12);
  EXPECT_NEAR(got[vec.index_of("a b")], idf_b / norm, 1e-12);
  EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  for (std::size_t k = 1; k < x.nnz(); ++k) EXPECT_LT(x.indices[k - 1], x.indices[k]);
}

TEST(TfIdf, OutOfVocabularyDocIsZero) {
  const std::vector<TokenDoc> docs = {{"a"}, {"a"}};
  const auto vec = TfIdfVectorizer::fit(docs);
  EXPECT_EQ(vec.transform(TokenDoc{"z", "y"}).nnz(), 0u);
  EXPECT_EQ(vec.transform(TokenDoc{}).nnz(), 0u);
}

TEST(TfIdf, NgramsInOrder) {
  EXPECT_EQ(ngrams({"x", "y", "z"}), (std::vector<std::string>{"x", "x y", "y", "y z", "z"}));
  EXPECT_TRUE(ngrams({}).empty());
}

TEST(TfIdf, SerializationIsDeterministicAcrossThreads) {
  std::vector<TokenDoc> docs;
  for (const auto& text : testing::sample_corpus()) docs.push_back(whitespace_tokenize(text).surfaces());
  const auto one = TfIdfVectorizer::fit(docs, 2, 1);
  const auto four = TfIdfVectorizer::fit(docs, 2, 4);
  EXPECT_EQ(one.serialize(), four.serialize());
  EXPECT_TRUE(one.serialize().starts_with("tfidf-v1\n"));
  const auto a = one.transform(docs, 1);
  const auto b = one.transform(docs, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].indices, b[i].indices);
    EXPECT_EQ(a[i].values, b[i].values);
  }
}

TEST(TfIdf, EmptyTrainingSet) {
  const std::vector<TokenDoc> none;
  EXPECT_EQ(error_code_of([&] { TfIdfVectorizer::fit(none); }), ErrorCode::kEmptyTrainingSet);
}

TEST(LogReg, ObjectiveMatchesDenseDefinition) {
  const auto p = random_problem(3, 20);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.5);
  std::vector<double> W(p.K * p.D), b(p.K);
  for (auto& w : W) w = g(rng);
  for (auto& v : b) v = g(rng);
  EXPECT_NEAR(logreg_objective(p.X, p.y, p.K, 0.7, W, b, nullptr, nullptr),
              dense_objective(p.dense, p.y, p.K, 0.7, W, b), 1e-10);
}

TEST(LogReg, GradientMatchesFiniteDifferences) {
  const auto p = random_problem(9, 20);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 0.5);
  std::vector<double> W(p.K * p.D), b(p.K);
  for (auto& w : W) w = g(rng);
  for (auto& v : b) v = g(rng);
  const double C = 1.5;
  std::vector<double> gw, gb;
  logreg_objective(p.X, p.y, p.K, C, W, b, &gw, &gb);
  ASSERT_EQ(gw.size(), W.size());
  ASSERT_EQ(gb.size(), b.size());
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t k = 0; k < W.size(); ++k) {
    auto plus = W, minus = W;
    plus[k] += h;
    minus[k] -= h;
    const double fd = (dense_objective(p.dense, p.y, p.K, C, plus, b) -
                       dense_objective(p.dense, p.y, p.K, C, minus, b)) / (2 * h);
    worst = std::max(worst, std::abs(fd - gw[k]));
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    auto plus = b, minus = b;
    plus[k] += h;
    minus[k] -= h;
    const double fd = (dense_objective(p.dense, p.y, p.K, C, W, plus) -
                       dense_objective(p.dense, p.y, p.K, C, W, minus)) / (2 * h);
    worst = std::max(worst, std::abs(fd - gb[k]));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(LogReg, SeparatesTwoPoints) {
  const SparseMatrix X = {dense_to_sparse({1.0, 0.0}), dense_to_sparse({0.0, 1.0})};
  const std::vector<std::size_t> y = {0, 1};
  const auto model = train_logreg(X, y, 2, 2, 100.0);
  EXPECT_EQ(model.predict(X[0]), 0u);
  EXPECT_EQ(model.predict(X[1]), 1u);
  EXPECT_GT(model.predict_proba(X[0])[0], 0.9);
}

TEST(LogReg, SmallerCShrinksWeights) {
  const auto p = random_problem(5, 60);
  auto norm = [](const LogisticModel& m) {
    double s = 0;
    for (double w : m.weights) s += w * w;
    return std::sqrt(s);
  };
  const auto tight = train_logreg(p.X, p.y, p.K, p.D, 0.01);
  const auto loose = train_logreg(p.X, p.y, p.K, p.D, 10.0);
  EXPECT_LT(norm(tight), norm(loose));
}

TEST(LogReg, LossNeverIncreasesAndProbabilitiesSumToOne) {
  const auto p = random_problem(6, 80);
  const auto model = train_logreg(p.X, p.y, p.K, p.D, 1.0, {200, 1e-8});
  ASSERT_GE(model.loss_history.size(), 2u);
  EXPECT_NEAR(model.loss_history.front(), static_cast<double>(p.X.size()) * std::log(3.0), 1e-9);
  for (std::size_t i = 1; i < model.loss_history.size(); ++i) {
    EXPECT_LE(model.loss_history[i], model.loss_history[i - 1]);
  }
  for (const auto& x : p.X) {
    const auto proba = model.predict_proba(x);
    double s = 0;
    for (double v : proba) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(LogReg, Errors) {
  const auto p = random_problem(1, 9);
  const std::vector<std::size_t> short_y(3, 0);
  EXPECT_EQ(error_code_of([&] { train_logreg(p.X, short_y, 3, p.D, 1.0); }), ErrorCode::kLengthMismatch);
  const std::vector<std::size_t> one_class(9, 1);
  EXPECT_EQ(error_code_of([&] { train_logreg(p.X, one_class, 3, p.D, 1.0); }), ErrorCode::kSingleClass);
  EXPECT_EQ(error_code_of([&] { train_logreg(p.X, p.y, 3, p.D, 0.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { train_logreg(p.X, p.y, 2, p.D, 1.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { train_logreg(p.X, p.y, 3, 2, 1.0); }), ErrorCode::kInvalidArgument);
  auto bad = p.X;
  bad[0].values[0] = std::nan("");
  EXPECT_EQ(error_code_of([&] { train_logreg(bad, p.y, 3, p.D, 1.0); }), ErrorCode::kNonFinite);
}

TEST(Metrics, HandComputedF1) {
  EXPECT_NEAR(macro_f1(std::vector<std::size_t>{0, 1, 2}, std::vector<std::size_t>{0, 2, 1}), 1.0 / 3, 1e-12);
  // class 0: tp 2 fp 0 fn 0 -> 1; class 1: tp 2 fp 0 fn 1 -> 0.8; class 2: tp 1 fp 1 fn 0 -> 2/3.
  const std::vector<std::size_t> t = {0, 0, 1, 1, 1, 2};
  const std::vector<std::size_t> p = {0, 0, 1, 1, 2, 2};
  EXPECT_NEAR(macro_f1(t, p), (1.0 + 0.8 + 2.0 / 3) / 3, 1e-12);
  // class 0: tp 1 fn 2 -> 0.5; class 1: tp 2 fp 2 -> 2/3; class 2: tp 3 -> 1.
  const std::vector<std::size_t> t2 = {0, 0, 0, 1, 1, 2, 2, 2};
  const std::vector<std::size_t> p2 = {0, 1, 1, 1, 1, 2, 2, 2};
  EXPECT_NEAR(macro_f1(t2, p2), (0.5 + 2.0 / 3 + 1.0) / 3, 1e-12);
  // Predicted classes absent from y_true do not count.
  EXPECT_NEAR(macro_f1(std::vector<std::size_t>{0, 0, 1, 1}, std::vector<std::size_t>{0, 2, 1, 1}),
              (2.0 / 3 + 1.0) / 2, 1e-12);
  EXPECT_DOUBLE_EQ(accuracy(t, p), 5.0 / 6);
  const auto per = per_class_f1(t, p);
  EXPECT_NEAR(per.at(1), 0.8, 1e-12);
  EXPECT_EQ(error_code_of([&] { macro_f1(t, std::vector<std::size_t>{0}); }), ErrorCode::kLengthMismatch);
}

TEST(Metrics, MatchesPrecisionRecallOracle) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> label(0, 4), len(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = len(rng);
    std::vector<std::size_t> t(n), p(n);
    for (auto& v : t) v = label(rng);
    for (auto& v : p) v = label(rng);
    ASSERT_NEAR(macro_f1(t, p), f1_oracle(t, p), 1e-12);
  }
}

TEST(TuneAndEvaluate, SeparableCorpusScoresPerfectly) {
  const auto corpus = separable_corpus();
  const auto report = tune_and_evaluate(corpus, TokenizerHandle::whitespace());
  EXPECT_DOUBLE_EQ(report.macro_f1, 1.0);
  EXPECT_DOUBLE_EQ(report.test_acc, 1.0);
  EXPECT_EQ(report.per_class_f1.size(), 3u);
  EXPECT_EQ(report.corpus_fingerprint, corpus.fingerprint());
  // Every C separates the data, so the tie goes to the smallest.
  EXPECT_DOUBLE_EQ(report.selected_C, 0.25);
  ASSERT_EQ(report.val_acc_by_C.size(), default_c_grid().size());
}

TEST(TuneAndEvaluate, SingleValueGrid) {
  EvalOptions options;
  options.grid = {3.0};
  const auto report = tune_and_evaluate(separable_corpus(), TokenizerHandle::whitespace(), options);
  EXPECT_DOUBLE_EQ(report.selected_C, 3.0);
  options.grid.clear();
  EXPECT_EQ(error_code_of([&] { tune_and_evaluate(separable_corpus(), TokenizerHandle::whitespace(), options); }),
            ErrorCode::kInvalidArgument);
}

TEST(TuneAndEvaluate, VectorizerSeesOnlyTrainingSplit) {
  auto corpus = separable_corpus();
  // A word that only ever appears in held-out documents.
  for (auto& s : corpus.samples) {
    if (s.split != Split::kTrain) {
      s.text = NormalizedText::adopt(s.text.content() + " অদৃশ্য", s.text.fingerprint());
    }
  }
  std::vector<TokenDoc> train_docs, all_docs;
  for (const auto& s : corpus.samples) {
    auto doc = whitespace_tokenize(s.text).surfaces();
    if (s.split == Split::kTrain) train_docs.push_back(doc);
    all_docs.push_back(std::move(doc));
  }
  const auto report = tune_and_evaluate(corpus, TokenizerHandle::whitespace());
  EXPECT_EQ(report.feature_count, TfIdfVectorizer::fit(train_docs).feature_count());
  EXPECT_LT(report.feature_count, TfIdfVectorizer::fit(all_docs).feature_count());
}

TEST(EvalReport, JsonShape) {
  const auto report = tune_and_evaluate(separable_corpus(), TokenizerHandle::whitespace());
  const auto j = nlohmann::json::parse(report.to_json());
  for (const char* key : {"tokenizer", "selected_C", "val_acc", "test_acc", "macro_f1", "per_class_f1"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["tokenizer"], "whitespace");
  EXPECT_EQ(j["per_class_f1"].size(), 3u);
}

}  // namespace
}  // namespace bnbpe
