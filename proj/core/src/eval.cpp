#include "bnbpe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bnbpe/errors.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/parallel.hpp"

namespace bnbpe {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_labels(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "y_true has " + std::to_string(y_true.size()) +
                                                " labels, y_pred has " +
                                                std::to_string(y_pred.size()));
  }
}

}  // namespace

double SparseVector::norm() const { return std::sqrt(dot(values, values)); }

std::vector<std::string> ngrams(const TokenDoc& doc) {
  std::vector<std::string> out;
  out.reserve(doc.size() * 2);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(doc[i]);
    if (i + 1 < doc.size()) out.push_back(doc[i] + " " + doc[i + 1]);
  }
  return out;
}

TfIdfVectorizer TfIdfVectorizer::fit(std::span<const TokenDoc> docs, std::size_t min_df,
                                     std::size_t threads) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training documents");
  threads = std::max<std::size_t>(1, threads);
  std::vector<std::map<std::string, std::size_t>> partial(threads);
  parallel_chunks(docs.size(), threads, [&](std::size_t b, std::size_t e, std::size_t t) {
    for (std::size_t i = b; i < e; ++i) {
      const auto grams = ngrams(docs[i]);
      std::set<std::string_view> seen(grams.begin(), grams.end());
      for (auto g : seen) ++partial[t][std::string(g)];
    }
  });
  std::map<std::string, std::size_t> df;
  for (auto& p : partial) {
    for (auto& [g, n] : p) df[g] += n;
  }

  TfIdfVectorizer v;
  v.min_df_ = min_df;
  v.document_count_ = docs.size();
  const double n = static_cast<double>(docs.size());
  for (const auto& [g, count] : df) {
    if (count < min_df) continue;
    v.index_.emplace(g, static_cast<std::uint32_t>(v.features_.size()));
    v.features_.push_back(g);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return v;
}

std::int64_t TfIdfVectorizer::index_of(const std::string& ngram) const {
  auto it = index_.find(ngram);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

SparseVector TfIdfVectorizer::transform(const TokenDoc& doc) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& g : ngrams(doc)) {
    auto it = index_.find(g);
    if (it != index_.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  out.indices.reserve(counts.size());
  out.values.reserve(counts.size());
  for (const auto& [idx, c] : counts) {
    out.indices.push_back(idx);
    out.values.push_back(c * idf_[idx]);
  }
  const double norm = out.norm();
  if (norm > 0.0) {
    for (auto& x : out.values) x /= norm;
  }
  return out;
}

SparseMatrix TfIdfVectorizer::transform(std::span<const TokenDoc> docs, std::size_t threads) const {
  SparseMatrix out(docs.size());
  parallel_chunks(docs.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) out[i] = transform(docs[i]);
  });
  return out;
}

void TfIdfVectorizer::write(std::ostream& out) const {
  out << "tfidf-v1\n"
      << "ngram_range: 1,2\n"
      << "min_df: " << min_df_ << '\n'
      << "documents: " << document_count_ << '\n'
      << "features: " << features_.size() << '\n';
  std::ostringstream num;
  num << std::setprecision(17);
  for (std::size_t i = 0; i < features_.size(); ++i) {
    num.str("");
    num << idf_[i];
    out << features_[i] << '\t' << num.str() << '\n';
  }
}

std::string TfIdfVectorizer::serialize() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::vector<double> LogisticModel::predict_proba(const SparseVector& x) const {
  std::vector<double> z(bias);
  for (std::size_t k = 0; k < class_count; ++k) {
    const double* w = weights.data() + k * feature_count;
    for (std::size_t j = 0; j < x.nnz(); ++j) z[k] += w[x.indices[j]] * x.values[j];
  }
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto& v : z) sum += (v = std::exp(v - m));
  for (auto& v : z) v /= sum;
  return z;
}

std::size_t LogisticModel::predict(const SparseVector& x) const {
  const auto p = predict_proba(x);
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

double logreg_objective(const SparseMatrix& X, std::span<const std::size_t> y,
                        std::size_t class_count, double C, std::span<const double> weights,
                        std::span<const double> bias, std::vector<double>* grad_weights,
                        std::vector<double>* grad_bias) {
  const std::size_t d = class_count == 0 ? 0 : weights.size() / class_count;
  if (grad_weights) grad_weights->assign(weights.size(), 0.0);
  if (grad_bias) grad_bias->assign(class_count, 0.0);

  double loss = 0.0;
  std::vector<double> z(class_count);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& x = X[i];
    for (std::size_t k = 0; k < class_count; ++k) {
      const double* w = weights.data() + k * d;
      double s = bias[k];
      for (std::size_t j = 0; j < x.nnz(); ++j) s += w[x.indices[j]] * x.values[j];
      z[k] = s;
    }
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - m);
    const double lse = m + std::log(sum);
    loss += lse - z[y[i]];
    if (!grad_weights && !grad_bias) continue;
    for (std::size_t k = 0; k < class_count; ++k) {
      const double r = std::exp(z[k] - lse) - (k == y[i] ? 1.0 : 0.0);
      if (grad_bias) (*grad_bias)[k] += r;
      if (grad_weights) {
        double* g = grad_weights->data() + k * d;
        for (std::size_t j = 0; j < x.nnz(); ++j) g[x.indices[j]] += r * x.values[j];
      }
    }
  }
  loss += dot(weights, weights) / (2.0 * C);
  if (grad_weights) {
    for (std::size_t i = 0; i < weights.size(); ++i) (*grad_weights)[i] += weights[i] / C;
  }
  return loss;
}

LogisticModel train_logreg(const SparseMatrix& X, std::span<const std::size_t> y,
                           std::size_t class_count, std::size_t feature_count, double C,
                           const LogRegOptions& options) {
  if (X.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(X.size()) + " rows but " +
                                                std::to_string(y.size()) + " labels");
  }
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw Error(ErrorCode::kInvalidArgument, "C must be positive and finite");
  }
  std::set<std::size_t> present;
  for (auto label : y) {
    if (label >= class_count) {
      throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(label) +
                                                   " out of range for " +
                                                   std::to_string(class_count) + " classes");
    }
    present.insert(label);
  }
  if (present.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "training labels contain fewer than two classes");
  }
  for (const auto& row : X) {
    for (auto idx : row.indices) {
      if (idx >= feature_count) throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
    }
  }

  LogisticModel model;
  model.class_count = class_count;
  model.feature_count = feature_count;
  model.C = C;
  model.weights.assign(class_count * feature_count, 0.0);
  model.bias.assign(class_count, 0.0);

  std::vector<double> gw, gb, cand_w, cand_b, cand_gw, cand_gb;
  double f = logreg_objective(X, y, class_count, C, model.weights, model.bias, &gw, &gb);
  if (!std::isfinite(f)) throw Error(ErrorCode::kNonFinite, "initial loss is not finite");
  model.loss_history.push_back(f);

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const double gsq = dot(gw, gw) + dot(gb, gb);
    if (!std::isfinite(gsq)) throw Error(ErrorCode::kNonFinite, "gradient is not finite");
    if (std::sqrt(gsq) < options.tol) {
      model.converged = true;
      break;
    }
    double t = step;
    bool accepted = false;
    while (t > 1e-30) {
      cand_w = model.weights;
      cand_b = model.bias;
      for (std::size_t i = 0; i < cand_w.size(); ++i) cand_w[i] -= t * gw[i];
      for (std::size_t k = 0; k < cand_b.size(); ++k) cand_b[k] -= t * gb[k];
      const double fc = logreg_objective(X, y, class_count, C, cand_w, cand_b, &cand_gw, &cand_gb);
      if (std::isfinite(fc) && fc <= f - kArmijo * t * gsq) {
        model.weights.swap(cand_w);
        model.bias.swap(cand_b);
        gw.swap(cand_gw);
        gb.swap(cand_gb);
        f = fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no descent possible at machine precision
    model.loss_history.push_back(f);
    ++model.iterations;
    step = t * 2.0;
  }
  if (!std::isfinite(f)) throw Error(ErrorCode::kNonFinite, "loss diverged");
  return model;
}

double accuracy(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred) {
  check_labels(y_true, y_pred);
  if (y_true.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hit += y_true[i] == y_pred[i];
  return static_cast<double>(hit) / static_cast<double>(y_true.size());
}

std::map<std::size_t, double> per_class_f1(std::span<const std::size_t> y_true,
                                           std::span<const std::size_t> y_pred) {
  check_labels(y_true, y_pred);
  std::map<std::size_t, double> out;
  for (auto c : std::set<std::size_t>(y_true.begin(), y_true.end())) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == c, p = y_pred[i] == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    const auto denom = 2 * tp + fp + fn;
    out[c] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return out;
}

double macro_f1(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred) {
  const auto f1 = per_class_f1(y_true, y_pred);
  if (f1.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [c, v] : f1) sum += v;
  return sum / static_cast<double>(f1.size());
}

std::string EvalReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["tokenizer"] = tokenizer;
  j["selected_C"] = selected_C;
  j["val_acc"] = val_acc;
  j["test_acc"] = test_acc;
  j["macro_f1"] = macro_f1;
  j["per_class_f1"] = nlohmann::ordered_json::object();
  for (const auto& [name, f1] : per_class_f1) j["per_class_f1"][name] = f1;
  j["feature_count"] = feature_count;
  auto& by_c = j["val_acc_by_C"] = nlohmann::ordered_json::array();
  for (const auto& [c, acc] : val_acc_by_C) by_c.push_back({{"C", c}, {"val_acc", acc}});
  j["corpus_fingerprint"] = to_hex(corpus_fingerprint);
  j["features"] = "token unigrams+bigrams, min_df 2 on train split, raw tf x ln((1+N)/(1+df))+1, L2 rows";
  j["classifier"] =
      "multinomial logistic regression, sum cross-entropy + ||W||^2/(2C), full-batch gradient "
      "descent with Armijo backtracking from zero";
  return j.dump(indent);
}

std::vector<TokenDoc> tokenize_docs(const TokenizerHandle& handle,
                                    std::span<const LabeledSample* const> samples,
                                    std::size_t threads) {
  std::vector<TokenDoc> docs(samples.size());
  parallel_chunks(samples.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) docs[i] = tokenize(handle, samples[i]->text).surfaces();
  });
  return docs;
}

EvalReport tune_and_evaluate(const LabeledCorpus& corpus, const TokenizerHandle& handle,
                             const EvalOptions& options) {
  if (options.grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty C grid");
  for (double c : options.grid) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, "grid values must be positive and finite");
    }
  }
  const auto train = corpus.split(Split::kTrain);
  const auto val = corpus.split(Split::kVal);
  const auto test = corpus.split(Split::kTest);
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "train split is empty");
  if (val.empty()) throw Error(ErrorCode::kInvalidArgument, "validation split is empty");
  if (test.empty()) throw Error(ErrorCode::kInvalidArgument, "test split is empty");

  const auto labels_of = [](const std::vector<const LabeledSample*>& s) {
    std::vector<std::size_t> y;
    for (const auto* p : s) y.push_back(p->label);
    return y;
  };
  const auto y_train = labels_of(train), y_val = labels_of(val), y_test = labels_of(test);

  const auto train_docs = tokenize_docs(handle, train, options.threads);
  const auto vectorizer = TfIdfVectorizer::fit(train_docs, options.min_df, options.threads);
  const auto X_train = vectorizer.transform(train_docs, options.threads);
  const auto X_val = vectorizer.transform(tokenize_docs(handle, val, options.threads), options.threads);
  const auto X_test =
      vectorizer.transform(tokenize_docs(handle, test, options.threads), options.threads);

  const std::size_t k = corpus.label_names.size();
  std::vector<LogisticModel> models(options.grid.size());
  parallel_chunks(options.grid.size(), options.threads,
                  [&](std::size_t b, std::size_t e, std::size_t) {
                    for (std::size_t i = b; i < e; ++i) {
                      models[i] = train_logreg(X_train, y_train, k, vectorizer.feature_count(),
                                               options.grid[i], options.logreg);
                    }
                  });

  const auto predict_all = [](const LogisticModel& m, const SparseMatrix& X) {
    std::vector<std::size_t> out;
    out.reserve(X.size());
    for (const auto& x : X) out.push_back(m.predict(x));
    return out;
  };

  EvalReport report;
  report.tokenizer = handle.name();
  report.feature_count = vectorizer.feature_count();
  report.corpus_fingerprint = corpus.fingerprint();
  std::size_t best = 0;
  double best_acc = -1.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double acc = accuracy(y_val, predict_all(models[i], X_val));
    report.val_acc_by_C.emplace_back(options.grid[i], acc);
    if (acc > best_acc || (acc == best_acc && options.grid[i] < options.grid[best])) {
      best = i;
      best_acc = acc;
    }
  }
  report.selected_C = options.grid[best];
  report.val_acc = best_acc;
  const auto pred = predict_all(models[best], X_test);
  report.test_acc = accuracy(y_test, pred);
  report.macro_f1 = macro_f1(y_test, pred);
  for (const auto& [c, f1] : per_class_f1(y_test, pred)) {
    report.per_class_f1[corpus.label_names.at(c)] = f1;
  }
  return report;
}

}  // namespace bnbpe
