#include "bnbpe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bnbpe/errors.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/parallel.hpp"

namespace bnbpe {
namespace {

struct PendingRow {
  std::string text;
  std::string label;
  std::size_t line;
};

void skip_rest_of_line(std::istream& in, std::size_t& lines) {
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '\n') {
      ++lines;
      return;
    }
  }
}

void note_malformed(LoadResult& result, std::size_t line, const std::string& reason,
                    std::size_t max_malformed) {
  result.malformed.push_back("line " + std::to_string(line) + ": " + reason);
  if (result.malformed.size() > max_malformed) {
    throw Error(ErrorCode::kMalformedRow,
                std::to_string(result.malformed.size()) + " malformed rows (limit " +
                    std::to_string(max_malformed) + "); last at " + result.malformed.back());
  }
}

std::string strip_bom(std::string s) {
  if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.erase(0, 3);
  return s;
}

std::vector<PendingRow> read_csv_rows(std::istream& in, const LoadOptions& options,
                                      LoadResult& result) {
  std::vector<std::string> header;
  std::size_t line = 1;
  std::size_t consumed = 0;
  if (!read_csv_record(in, header, consumed)) {
    throw Error(ErrorCode::kMissingColumn, "empty CSV input: no header row");
  }
  line += consumed;
  if (!header.empty()) header[0] = strip_bom(header[0]);
  const auto find = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kMissingColumn, "CSV header has no '" + std::string(name) + "' column");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_col = find("text");
  const std::size_t label_col = find("label");

  std::vector<PendingRow> rows;
  std::vector<std::string> fields;
  while (true) {
    const std::size_t start = line;
    consumed = 0;
    bool more;
    try {
      more = read_csv_record(in, fields, consumed);
    } catch (const Error& e) {
      line += consumed;
      note_malformed(result, start, e.detail(), options.max_malformed);
      continue;
    }
    line += consumed;
    if (!more) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != header.size()) {
      note_malformed(result, start,
                     "expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()),
                     options.max_malformed);
      continue;
    }
    if (fields[label_col].empty()) {
      note_malformed(result, start, "empty label", options.max_malformed);
      continue;
    }
    rows.push_back({std::move(fields[text_col]), std::move(fields[label_col]), start});
  }
  return rows;
}

std::vector<PendingRow> read_jsonl_rows(std::istream& in, const LoadOptions& options,
                                        LoadResult& result) {
  std::vector<PendingRow> rows;
  std::string raw;
  std::size_t line = 0;
  bool checked_columns = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line == 1) raw = strip_bom(raw);
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    auto obj = nlohmann::json::parse(raw, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      note_malformed(result, line, "not a JSON object", options.max_malformed);
      continue;
    }
    if (!checked_columns) {
      for (const char* key : {"text", "label"}) {
        if (!obj.contains(key)) {
          throw Error(ErrorCode::kMissingColumn,
                      "line " + std::to_string(line) + ": no '" + key + "' field");
        }
      }
      checked_columns = true;
    }
    auto text = obj.find("text");
    auto label = obj.find("label");
    if (text == obj.end() || !text->is_string()) {
      note_malformed(result, line, "'text' missing or not a string", options.max_malformed);
      continue;
    }
    std::string label_text;
    if (label != obj.end() && label->is_string()) {
      label_text = label->get<std::string>();
    } else if (label != obj.end() && label->is_number_integer()) {
      label_text = std::to_string(label->get<long long>());
    }
    if (label_text.empty()) {
      note_malformed(result, line, "'label' missing, empty, or not a string/integer",
                     options.max_malformed);
      continue;
    }
    rows.push_back({text->get<std::string>(), std::move(label_text), line});
  }
  return rows;
}

// Rejection sampling keeps the draw unbiased and independent of the standard
// library's distribution implementation.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

void validate_ratios(const SplitRatios& r) {
  for (double v : r.as_array()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "split ratios must be finite and non-negative");
    }
  }
  const double sum = r.train + r.val + r.test;
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view text) {
  if (text == "csv") return CorpusFormat::kCsv;
  if (text == "jsonl") return CorpusFormat::kJsonl;
  throw Error(ErrorCode::kInvalidArgument, "unknown corpus format '" + std::string(text) + "'");
}

CorpusFormat guess_corpus_format(std::string_view path) {
  const auto ext = std::filesystem::path(path).extension().string();
  return (ext == ".jsonl" || ext == ".json") ? CorpusFormat::kJsonl : CorpusFormat::kCsv;
}

const char* to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& lines_consumed) {
  fields.clear();
  lines_consumed = 0;
  if (in.peek() == EOF) return false;

  std::string field;
  bool quoted = false;      // current field started with a quote
  bool in_quotes = false;   // inside the quoted section
  bool after_quote = false; // closing quote seen, expecting , or end of record
  int c;
  while ((c = in.get()) != EOF) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++lines_consumed;
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      quoted = after_quote = false;
      continue;
    }
    if (c == '\r' && in.peek() == '\n') continue;
    if (c == '\n') {
      ++lines_consumed;
      fields.push_back(std::move(field));
      return true;
    }
    if (after_quote) {
      skip_rest_of_line(in, lines_consumed);
      throw Error(ErrorCode::kMalformedRow, "unexpected character after closing quote");
    }
    if (c == '"') {
      if (!field.empty() || quoted) {
        skip_rest_of_line(in, lines_consumed);
        throw Error(ErrorCode::kMalformedRow, "stray quote in unquoted field");
      }
      quoted = in_quotes = true;
      continue;
    }
    field.push_back(static_cast<char>(c));
  }
  if (in_quotes) throw Error(ErrorCode::kMalformedRow, "unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

LoadResult read_labeled_corpus(std::istream& in, CorpusFormat format, const LoadOptions& options) {
  options.normalization.validate();
  LoadResult result;
  auto rows = format == CorpusFormat::kCsv ? read_csv_rows(in, options, result)
                                           : read_jsonl_rows(in, options, result);
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");

  std::vector<NormalizedText> texts(rows.size());
  parallel_chunks(rows.size(), options.threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) texts[i] = clean(rows[i].text, options.normalization);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (texts[i].empty()) {
      ++result.dropped_count;
      continue;
    }
    result.samples.push_back({std::move(texts[i]), std::move(rows[i].label), rows[i].line});
  }
  return result;
}

LoadResult load_labeled_corpus(const std::string& path, CorpusFormat format,
                               const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return read_labeled_corpus(in, format, options);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

std::vector<const LabeledSample*> LabeledCorpus::split(Split which) const {
  std::vector<const LabeledSample*> out;
  for (const auto& s : samples) {
    if (s.split == which) out.push_back(&s);
  }
  return out;
}

std::size_t LabeledCorpus::count(Split which) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [which](const LabeledSample& s) { return s.split == which; }));
}

std::uint64_t LabeledCorpus::fingerprint() const {
  Fnv1a64 h;
  h.update_u64(samples.size());
  for (const auto& s : samples) {
    h.update_u64(s.text.content().size()).update(s.text.content());
    const auto& name = label_names.at(s.label);
    h.update_u64(name.size()).update(name);
    h.update_u64(static_cast<std::uint64_t>(s.split));
  }
  return h.digest();
}

std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& ratios) {
  validate_ratios(ratios);
  const auto r = ratios.as_array();
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * r[i];
    // The epsilon absorbs products like 10 * 0.7 landing just under 7.
    const double whole = std::floor(exact + 1e-9);
    counts[i] = static_cast<std::size_t>(whole);
    remainder[i] = std::max(0.0, exact - whole);
    assigned += counts[i];
  }
  while (assigned > n) {  // only reachable through rounding of a ratio sum slightly above 1
    auto i = static_cast<std::size_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[i];
    --assigned;
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % 3, ++assigned) ++counts[order[k]];
  return counts;
}

LabeledCorpus stratified_split(std::vector<RawSample> samples, SplitRatios ratios,
                               std::uint64_t seed) {
  validate_ratios(ratios);
  LabeledCorpus corpus;
  corpus.ratios = ratios;
  corpus.seed = seed;

  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < samples.size(); ++i) by_label[samples[i].label].push_back(i);
  for (const auto& [name, members] : by_label) {
    if (members.size() < 3) {
      throw Error(ErrorCode::kClassTooSmall, "class '" + name + "' has " +
                                                 std::to_string(members.size()) +
                                                 " samples; at least 3 are needed");
    }
    corpus.label_names.push_back(name);
  }

  corpus.samples.resize(samples.size());
  std::mt19937_64 rng(seed);
  std::size_t label_id = 0;
  for (auto& [name, members] : by_label) {
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      std::swap(members[i], members[bounded_draw(rng, i + 1)]);
    }
    const auto counts = apportion(members.size(), ratios);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t k = 0; k < counts[s]; ++k, ++pos) {
        auto& out = corpus.samples[members[pos]];
        out.label = label_id;
        out.split = static_cast<Split>(s);
      }
    }
    ++label_id;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    corpus.samples[i].text = std::move(samples[i].text);
  }
  return corpus;
}

void write_split_dir(const LabeledCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    const auto path = (std::filesystem::path(dir) / (std::string(to_string(s)) + ".csv")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    out << "text,label\n";
    for (const auto* sample : corpus.split(s)) {
      out << csv_escape(sample->text.content()) << ','
          << csv_escape(corpus.label_names.at(sample->label)) << '\n';
    }
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
  }
}

LabeledCorpus read_split_dir(const std::string& dir, const LoadOptions& options) {
  std::vector<std::pair<Split, RawSample>> rows;
  bool any = false;
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    const auto path = std::filesystem::path(dir) / (std::string(to_string(s)) + ".csv");
    if (!std::filesystem::exists(path)) continue;
    any = true;
    auto loaded = load_labeled_corpus(path.string(), CorpusFormat::kCsv, options);
    for (auto& sample : loaded.samples) rows.emplace_back(s, std::move(sample));
  }
  if (!any) throw Error(ErrorCode::kIo, dir + ": no train.csv, val.csv or test.csv");

  LabeledCorpus corpus;
  std::map<std::string, std::size_t> ids;
  for (const auto& [split, sample] : rows) ids.emplace(sample.label, 0);
  for (auto& [name, id] : ids) {
    id = corpus.label_names.size();
    corpus.label_names.push_back(name);
  }
  for (auto& [split, sample] : rows) {
    corpus.samples.push_back({std::move(sample.text), ids.at(sample.label), split});
  }
  return corpus;
}

std::vector<NormalizedText> read_text_lines(std::istream& in, const NormalizationConfig& config,
                                            std::size_t threads) {
  config.validate();
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");
  std::vector<NormalizedText> texts(lines.size());
  parallel_chunks(lines.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) texts[i] = clean(lines[i], config);
  });
  std::erase_if(texts, [](const NormalizedText& t) { return t.empty(); });
  return texts;
}

std::vector<NormalizedText> load_text_lines(const std::string& path,
                                            const NormalizationConfig& config,
                                            std::size_t threads) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_text_lines(in, config, threads);
}

std::uint64_t texts_fingerprint(std::span<const NormalizedText> texts) {
  Fnv1a64 h;
  h.update_u64(texts.size());
  for (const auto& t : texts) h.update_u64(t.content().size()).update(t.content());
  return h.digest();
}

}  // namespace bnbpe
