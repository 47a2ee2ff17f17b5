#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnbpe/baselines.hpp"
#include "bnbpe/corpus.hpp"

namespace bnbpe {

using TokenDoc = std::vector<std::string>;

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  double norm() const;
};

using SparseMatrix = std::vector<SparseVector>;

// Unigrams and adjacent-token bigrams ("a b"), raw counts times smoothed idf
// ln((1 + N) / (1 + df)) + 1, rows L2-normalized.
class TfIdfVectorizer {
 public:
  static constexpr std::size_t kDefaultMinDf = 2;

  // Errors: kEmptyTrainingSet.
  static TfIdfVectorizer fit(std::span<const TokenDoc> docs, std::size_t min_df = kDefaultMinDf,
                             std::size_t threads = 1);

  SparseVector transform(const TokenDoc& doc) const;
  SparseMatrix transform(std::span<const TokenDoc> docs, std::size_t threads = 1) const;

  std::size_t feature_count() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t document_count() const { return document_count_; }
  std::size_t min_df() const { return min_df_; }
  // -1 if absent.
  std::int64_t index_of(const std::string& ngram) const;

  // Deterministic text form (features in index order, idf as round-trippable
  // decimals); identical fits serialize to identical bytes.
  void write(std::ostream& out) const;
  std::string serialize() const;

 private:
  std::size_t min_df_ = kDefaultMinDf;
  std::size_t document_count_ = 0;
  std::vector<std::string> features_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Every unigram and adjacent bigram of `doc`, in order of appearance.
std::vector<std::string> ngrams(const TokenDoc& doc);

struct LogisticModel {
  std::size_t class_count = 0;
  std::size_t feature_count = 0;
  std::vector<double> weights;  // class-major, class_count x feature_count
  std::vector<double> bias;
  double C = 1.0;
  std::vector<double> loss_history;  // one entry per accepted iterate, starting at zero init
  std::size_t iterations = 0;
  bool converged = false;

  // Softmax probabilities, summing to 1.
  std::vector<double> predict_proba(const SparseVector& x) const;
  std::size_t predict(const SparseVector& x) const;
};

// sum_i -log softmax(W x_i + b)[y_i] + ||W||^2 / (2C). Fills gradients when
// non-null (sized like the parameters).
double logreg_objective(const SparseMatrix& X, std::span<const std::size_t> y,
                        std::size_t class_count, double C, std::span<const double> weights,
                        std::span<const double> bias, std::vector<double>* grad_weights,
                        std::vector<double>* grad_bias);

struct LogRegOptions {
  std::size_t max_iter = 500;
  double tol = 1e-5;
};

// Full-batch gradient descent from zero with Armijo backtracking; stops when
// the gradient norm drops below tol or after max_iter steps.
//
// Errors: kSingleClass, kNonFinite, kLengthMismatch, kInvalidArgument.
LogisticModel train_logreg(const SparseMatrix& X, std::span<const std::size_t> y,
                           std::size_t class_count, std::size_t feature_count, double C,
                           const LogRegOptions& options = {});

double accuracy(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred);

// Class set = labels present in y_true. Errors: kLengthMismatch.
double macro_f1(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred);
std::map<std::size_t, double> per_class_f1(std::span<const std::size_t> y_true,
                                           std::span<const std::size_t> y_pred);

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0};
  return grid;
}

struct EvalOptions {
  std::vector<double> grid = default_c_grid();
  LogRegOptions logreg;
  std::size_t min_df = TfIdfVectorizer::kDefaultMinDf;
  std::size_t threads = 1;
};

struct EvalReport {
  std::string tokenizer;
  double selected_C = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_class_f1;
  std::size_t feature_count = 0;
  std::vector<std::pair<double, double>> val_acc_by_C;
  std::uint64_t corpus_fingerprint = 0;

  std::string to_json(int indent = 2) const;
};

// Tokenizes every document with `handle` (surfaces are opaque units).
std::vector<TokenDoc> tokenize_docs(const TokenizerHandle& handle,
                                    std::span<const LabeledSample* const> samples,
                                    std::size_t threads = 1);

// Fits the vectorizer on the train split only, one model per C (validation
// accuracy picks; ties go to the smaller C), then scores the test split.
//
// Errors: kEmptyTrainingSet, kInvalidArgument (empty val/test split or grid),
// plus anything raised by the components.
EvalReport tune_and_evaluate(const LabeledCorpus& corpus, const TokenizerHandle& handle,
                             const EvalOptions& options = {});

}  // namespace bnbpe
