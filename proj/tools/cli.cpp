#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bnbpe/baselines.hpp"
#include "bnbpe/bench.hpp"
#include "bnbpe/corpus.hpp"
#include "bnbpe/errors.hpp"
#include "bnbpe/grapheme.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/model_io.hpp"
#include "bnbpe/parallel.hpp"
#include "bnbpe/version.hpp"

namespace bnbpe::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

struct Input {
  std::string path;
  std::string bytes;
};

Input read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::kIo, "cannot open " + path);
    buf << file.rdbuf();
  }
  return {path, buf.str()};
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path == "-") {
    out << data;
    out.flush();
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  file << data;
  if (!file) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out.append(l).push_back('\n');
  return out;
}

std::vector<NormalizedText> normalize_lines(const std::vector<std::string>& lines,
                                            const NormalizationConfig& config,
                                            std::size_t threads) {
  std::vector<NormalizedText> texts(lines.size());
  parallel_chunks(lines.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) texts[i] = clean(lines[i], config);
  });
  return texts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, what + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, what + " is empty");
  return values;
}

// Records what a run consumed and produced, so rerunning with the same
// manifest reproduces the outputs.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) {
    j_["tool"] = "bnbpe";
    j_["version"] = std::string(kVersion);
    j_["subcommand"] = std::move(subcommand);
    j_["seed"] = nullptr;
    j_["config"] = json::object();
    j_["inputs"] = json::array();
    j_["outputs"] = json::array();
  }

  json& config() { return j_["config"]; }
  void seed(std::uint64_t s) { j_["seed"] = s; }
  void input(const std::string& path, std::string_view bytes) {
    j_["inputs"].push_back({{"path", path}, {"bytes", bytes.size()}, {"fnv1a64", to_hex(fnv1a64(bytes))}});
  }
  void output(const std::string& path, std::optional<std::string_view> bytes) {
    json o{{"path", path}};
    o["fnv1a64"] = bytes ? json(to_hex(fnv1a64(*bytes))) : json(nullptr);
    j_["outputs"].push_back(std::move(o));
  }
  void write(const std::string& path) const {
    std::ostringstream unused;
    write_output(path, j_.dump(2) + "\n", unused);
  }

 private:
  json j_;
};

std::string manifest_path_for(const std::string& artifact) { return artifact + ".manifest.json"; }

struct NormalizationFlags {
  bool keep_numerals = false;
  bool keep_web = false;
  bool no_nfkc = false;

  void add_to(CLI::App* app) {
    app->add_flag("--keep-numerals", keep_numerals, "Keep Bengali and other numerals");
    app->add_flag("--no-strip-web,--keep-web", keep_web, "Do not strip HTML tags, URLs and emoji");
    app->add_flag("--no-nfkc", no_nfkc, "Skip NFKC normalization");
  }

  NormalizationConfig config() const {
    NormalizationConfig c;
    c.strip_numerals = !keep_numerals;
    c.strip_web_artifacts = !keep_web;
    c.apply_nfkc = !no_nfkc;
    return c;
  }
};

std::size_t clamp_threads(std::size_t threads) { return std::max<std::size_t>(1, threads); }

// Training text: plain lines, a labeled CSV/JSONL file, or a split directory
// (train split only).
struct TrainingText {
  std::vector<NormalizedText> texts;
  std::vector<Input> inputs;
};

TrainingText load_training_text(const std::string& path, std::string format,
                                const NormalizationConfig& config, std::size_t threads,
                                std::istream& in) {
  TrainingText t;
  LoadOptions load;
  load.normalization = config;
  load.threads = threads;
  if (path != "-" && fs::is_directory(path)) {
    t.inputs.push_back(read_input((fs::path(path) / "train.csv").string(), in));
    auto corpus = read_split_dir(path, load);
    for (auto* s : corpus.split(Split::kTrain)) t.texts.push_back(s->text);
    return t;
  }
  auto input = read_input(path, in);
  if (format == "auto") {
    format = path == "-" ? "text" : std::string(fs::path(path).extension() == ".csv" ? "csv"
                                                : fs::path(path).extension() == ".jsonl" ? "jsonl"
                                                                                          : "text");
  }
  if (format == "text") {
    for (auto& text : normalize_lines(split_lines(input.bytes), config, threads)) {
      if (!text.empty()) t.texts.push_back(std::move(text));
    }
  } else {
    std::istringstream stream(input.bytes);
    auto loaded = read_labeled_corpus(stream, parse_corpus_format(format), load);
    for (auto& s : loaded.samples) t.texts.push_back(std::move(s.text));
  }
  t.inputs.push_back(std::move(input));
  return t;
}

ConstraintProfile make_profile(ConstraintMode mode, const std::string& suffixes,
                               const NormalizationConfig& config) {
  ConstraintProfile profile;
  profile.mode = mode;
  if (mode == ConstraintMode::kBengali) {
    profile.suffix_lexicon =
        suffixes.empty() ? default_suffix_lexicon(config) : load_suffix_lexicon(suffixes, config);
  }
  return profile;
}

std::string serialize_model(const BpeModel& model) {
  std::ostringstream out;
  write_model(model, out);
  return out.str();
}

json normalization_json(const NormalizationConfig& c) {
  return {{"canonical", c.canonical()}, {"fingerprint", to_hex(c.fingerprint())}};
}

// ---- subcommands -----------------------------------------------------------

struct NormalizeCmd {
  std::string in = "-", out = "-";
  std::size_t threads = 1;
  NormalizationFlags norm;

  void run(Streams& io) const {
    const auto config = norm.config();
    config.validate();
    const auto input = read_input(in, io.in);
    std::vector<std::string> lines;
    for (auto& t : normalize_lines(split_lines(input.bytes), config, clamp_threads(threads))) {
      lines.push_back(t.content());
    }
    const auto data = join_lines(lines);
    write_output(out, data, io.out);
    if (out != "-") {
      Manifest m("normalize");
      m.config()["normalization"] = normalization_json(config);
      m.input(in, input.bytes);
      m.output(out, data);
      m.write(manifest_path_for(out));
    }
  }
};

struct GraphemesCmd {
  std::string in = "-", out = "-";
  bool as_json = false;
  NormalizationFlags norm;

  void run(Streams& io) const {
    const auto config = norm.config();
    config.validate();
    const auto input = read_input(in, io.in);
    std::vector<std::string> lines;
    for (const auto& raw : split_lines(input.bytes)) {
      const auto clusters = segment_graphemes(clean(raw, config));
      if (as_json) {
        json arr = json::array();
        for (const auto& c : clusters) {
          json cps = json::array();
          for (char32_t cp : c.codepoints) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
            cps.push_back(buf);
          }
          arr.push_back({{"surface", c.surface}, {"codepoints", cps}, {"degenerate", c.degenerate}});
        }
        lines.push_back(arr.dump());
      } else {
        std::string line;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
          if (i > 0) line.push_back(' ');
          line += clusters[i].surface;
        }
        lines.push_back(std::move(line));
      }
    }
    write_output(out, join_lines(lines), io.out);
  }
};

struct SplitCmd {
  std::string in;
  std::string format = "auto";
  std::uint64_t seed = kDefaultSeed;
  std::string ratios = "0.7,0.1,0.2";
  std::string out_dir;
  std::size_t max_malformed = 10;
  std::size_t threads = 1;
  NormalizationFlags norm;

  static SplitRatios parse_ratios(const std::string& text) {
    const auto r = parse_doubles(text, "--ratios");
    if (r.size() != 3) throw Error(ErrorCode::kInvalidArgument, "--ratios needs train,val,test");
    return {r[0], r[1], r[2]};
  }

  static CorpusFormat resolve_format(const std::string& format, const std::string& path) {
    return format == "auto" ? guess_corpus_format(path) : parse_corpus_format(format);
  }

  void run(Streams& io) const {
    const auto config = norm.config();
    const auto input = read_input(in, io.in);
    LoadOptions load;
    load.normalization = config;
    load.max_malformed = max_malformed;
    load.threads = clamp_threads(threads);
    std::istringstream stream(input.bytes);
    auto loaded = read_labeled_corpus(stream, resolve_format(format, in), load);
    for (const auto& m : loaded.malformed) io.err << in << ": skipped " << m << '\n';
    const auto corpus = stratified_split(std::move(loaded.samples), parse_ratios(ratios), seed);
    write_split_dir(corpus, out_dir);
    io.err << "split: " << corpus.count(Split::kTrain) << " train, " << corpus.count(Split::kVal)
           << " val, " << corpus.count(Split::kTest) << " test, " << corpus.label_names.size()
           << " classes, " << loaded.dropped_count << " empty rows dropped\n";

    Manifest m("split");
    m.seed(seed);
    m.config()["format"] = to_string_format(resolve_format(format, in));
    m.config()["ratios"] = parse_doubles(ratios, "--ratios");
    m.config()["max_malformed"] = max_malformed;
    m.config()["normalization"] = normalization_json(config);
    m.config()["dropped_count"] = loaded.dropped_count;
    m.config()["malformed_count"] = loaded.malformed.size();
    m.input(in, input.bytes);
    for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
      const auto path = (fs::path(out_dir) / (std::string(to_string(s)) + ".csv")).string();
      m.output(path, read_input(path, io.in).bytes);
    }
    m.write((fs::path(out_dir) / "manifest.json").string());
  }

  static const char* to_string_format(CorpusFormat f) {
    return f == CorpusFormat::kCsv ? "csv" : "jsonl";
  }
};

struct TrainCmd {
  std::string corpus;
  std::string format = "auto";
  std::size_t vocab_size = 8000;
  std::string mode = "bengali";
  std::string suffixes;
  std::uint64_t min_pair_freq = 2;
  std::string out;
  std::size_t threads = 1;
  NormalizationFlags norm;

  void run(Streams& io) const {
    const auto config = norm.config();
    config.validate();
    auto data = load_training_text(corpus, format, config, clamp_threads(threads), io.in);
    TrainingOptions options;
    options.target_vocab_size = vocab_size;
    options.min_pair_freq = min_pair_freq;
    options.threads = clamp_threads(threads);
    options.profile = make_profile(parse_constraint_mode(mode), suffixes, config);
    const auto model = train(data.texts, options, config);
    const auto bytes = serialize_model(model);
    write_output(out, bytes, io.out);
    io.err << "train: " << data.texts.size() << " samples, alphabet " << model.alphabet().size()
           << ", merges " << model.merges().size() << ", vocab " << model.vocab_size() << '\n';
    if (out != "-") {
      Manifest m("train");
      m.config()["mode"] = mode;
      m.config()["vocab_size"] = vocab_size;
      m.config()["min_pair_freq"] = min_pair_freq;
      m.config()["suffixes"] = suffixes.empty() ? "built-in" : suffixes;
      m.config()["suffix_lexicon_hash"] = to_hex(options.profile.lexicon_hash());
      m.config()["format"] = format;
      m.config()["threads"] = options.threads;
      m.config()["normalization"] = normalization_json(config);
      for (const auto& i : data.inputs) m.input(i.path, i.bytes);
      if (!suffixes.empty()) m.input(suffixes, read_input(suffixes, io.in).bytes);
      m.output(out, bytes);
      m.write(manifest_path_for(out));
    }
  }
};

struct EncodeCmd {
  std::string model_path, in = "-", out = "-";
  bool ids = false;
  std::size_t threads = 1;

  void run(Streams& io) const {
    const auto model = load_model(model_path);
    const auto input = read_input(in, io.in);
    const auto lines = split_lines(input.bytes);
    const auto texts = normalize_lines(lines, model.normalization(), clamp_threads(threads));
    std::vector<std::string> encoded(texts.size());
    parallel_chunks(texts.size(), clamp_threads(threads), [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) encoded[i] = format_token_line(encode(texts[i], model), ids);
    });
    const auto data = join_lines(encoded);
    write_output(out, data, io.out);
    if (out != "-") {
      Manifest m("encode");
      m.config()["ids"] = ids;
      m.input(model_path, serialize_model(model));
      m.input(in, input.bytes);
      m.output(out, data);
      m.write(manifest_path_for(out));
    }
  }
};

struct DecodeCmd {
  std::string model_path, in = "-", out = "-";

  void run(Streams& io) const {
    std::optional<BpeModel> model;
    if (!model_path.empty()) model = load_model(model_path);
    const auto input = read_input(in, io.in);
    std::vector<std::string> decoded;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(input.bytes)) {
      ++line_no;
      try {
        decoded.push_back(decode(parse_token_line(line, model ? &*model : nullptr)));
      } catch (const Error& e) {
        throw Error(e.code(), in + ":" + std::to_string(line_no) + ": " + e.detail());
      }
    }
    const auto data = join_lines(decoded);
    write_output(out, data, io.out);
    if (out != "-") {
      Manifest m("decode");
      if (model) m.input(model_path, serialize_model(*model));
      m.input(in, input.bytes);
      m.output(out, data);
      m.write(manifest_path_for(out));
    }
  }
};

std::vector<TokenizerHandle> make_handles(const std::vector<std::string>& kinds,
                                          const std::vector<std::string>& model_specs,
                                          std::vector<Input>& model_inputs) {
  // Model specs are either kind=path or positional, matched in order to the
  // BPE kinds in `kinds`.
  std::map<std::string, std::string> by_kind;
  std::vector<std::string> positional;
  for (const auto& spec : model_specs) {
    if (auto eq = spec.find('='); eq != std::string::npos) {
      by_kind[spec.substr(0, eq)] = spec.substr(eq + 1);
    } else {
      positional.push_back(spec);
    }
  }
  std::map<std::string, std::shared_ptr<const BpeModel>> loaded;
  std::vector<TokenizerHandle> handles;
  std::size_t next_positional = 0;
  for (const auto& name : kinds) {
    const auto kind = parse_tokenizer_kind(name);
    if (kind == TokenizerKind::kWhitespace) {
      handles.push_back(TokenizerHandle::whitespace());
      continue;
    }
    std::string path;
    if (auto it = by_kind.find(name); it != by_kind.end()) {
      path = it->second;
    } else if (next_positional < positional.size()) {
      path = positional[next_positional++];
    } else {
      throw Error(ErrorCode::kMissingModel, "tokenizer '" + name + "' needs a model (--models)");
    }
    auto& model = loaded[path];
    if (!model) {
      model = std::make_shared<const BpeModel>(load_model(path));
      model_inputs.push_back({path, serialize_model(*model)});
    }
    handles.push_back(TokenizerHandle::bpe(kind, model));
  }
  return handles;
}

json eval_options_json(const EvalOptions& o) {
  return {{"grid", o.grid}, {"max_iter", o.logreg.max_iter}, {"tol", o.logreg.tol}, {"min_df", o.min_df}};
}

void add_split_inputs(Manifest& m, const std::string& dir, std::istream& in) {
  for (const auto* name : {"train.csv", "val.csv", "test.csv"}) {
    const auto path = (fs::path(dir) / name).string();
    if (fs::exists(path)) m.input(path, read_input(path, in).bytes);
  }
}

struct EvalCmd {
  std::string corpus, tokenizer = "bengali", model_path, grid = "0.25,0.5,1,2,4", report = "-";
  std::size_t max_iter = 500;
  double tol = 1e-5;
  std::size_t threads = 1;

  void run(Streams& io) const {
    std::vector<Input> model_inputs;
    std::vector<std::string> specs;
    if (!model_path.empty()) specs.push_back(model_path);
    const auto handle = make_handles({tokenizer}, specs, model_inputs).front();
    LoadOptions load;
    if (handle.model()) load.normalization = handle.model()->normalization();
    load.threads = clamp_threads(threads);
    const auto labeled = read_split_dir(corpus, load);
    EvalOptions options;
    options.grid = parse_doubles(grid, "--grid");
    options.logreg.max_iter = max_iter;
    options.logreg.tol = tol;
    options.threads = clamp_threads(threads);
    const auto result = tune_and_evaluate(labeled, handle, options);
    const auto data = result.to_json() + "\n";
    write_output(report, data, io.out);
    if (report != "-") {
      Manifest m("eval");
      m.config()["tokenizer"] = tokenizer;
      m.config()["eval"] = eval_options_json(options);
      m.config()["threads"] = options.threads;
      for (const auto& i : model_inputs) m.input(i.path, i.bytes);
      add_split_inputs(m, corpus, io.in);
      m.output(report, data);
      m.write(manifest_path_for(report));
    }
  }
};

struct BenchCmd {
  std::string corpus, tokenizers = "whitespace,bengali,generic", models, report = "-";
  std::string grid = "0.25,0.5,1,2,4";
  std::size_t warmup = 100, repeats = 3, threads = 1, throughput_threads = 1;
  bool with_eval = false;
  NormalizationFlags norm;

  void run(Streams& io) const {
    std::vector<Input> model_inputs;
    const auto handles = make_handles(split_list(tokenizers), split_list(models), model_inputs);
    // BPE models carry their own normalization; the corpus must match it.
    NormalizationConfig config = norm.config();
    for (const auto& h : handles) {
      if (h.model()) config = h.model()->normalization();
    }
    std::vector<NormalizedText> texts;
    std::optional<LabeledCorpus> labeled;
    Manifest m("bench");
    if (corpus != "-" && fs::is_directory(corpus)) {
      LoadOptions load;
      load.normalization = config;
      load.threads = clamp_threads(threads);
      labeled = read_split_dir(corpus, load);
      for (const auto& s : labeled->samples) texts.push_back(s.text);
      add_split_inputs(m, corpus, io.in);
    } else {
      if (with_eval) {
        throw Error(ErrorCode::kInvalidArgument, "--with-eval needs a split directory as --corpus");
      }
      const auto input = read_input(corpus, io.in);
      for (auto& t : normalize_lines(split_lines(input.bytes), config, clamp_threads(threads))) {
        if (!t.empty()) texts.push_back(std::move(t));
      }
      m.input(corpus, input.bytes);
    }
    CompareOptions options;
    options.include_eval = with_eval;
    options.threads = clamp_threads(threads);
    options.throughput.warmup = warmup;
    options.throughput.repeats = repeats;
    options.throughput.threads = clamp_threads(throughput_threads);
    options.eval.grid = parse_doubles(grid, "--grid");
    const auto result = compare(texts, handles, options, labeled ? &*labeled : nullptr);
    write_output(report, result.to_json() + "\n", io.out);
    print_table(result, io.err);
    if (report != "-") {
      m.config()["tokenizers"] = tokenizers;
      m.config()["warmup"] = warmup;
      m.config()["repeats"] = repeats;
      m.config()["with_eval"] = with_eval;
      m.config()["threads"] = options.threads;
      m.config()["throughput_threads"] = options.throughput.threads;
      if (with_eval) m.config()["eval"] = eval_options_json(options.eval);
      for (const auto& i : model_inputs) m.input(i.path, i.bytes);
      m.output(report, std::nullopt);  // contains timings
      m.write(manifest_path_for(report));
    }
  }

  static void print_table(const BenchmarkReport& r, std::ostream& err) {
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %14s %10s %10s\n", "tokenizer",
                  "avg_tok", "median", "tok/char", "samples/sec", "accuracy", "macro_f1");
    err << line;
    for (const auto& row : r.rows) {
      std::snprintf(line, sizeof line, "%-12s %10.2f %10.1f %10.4f %14.2f", row.tokenizer.c_str(),
                    row.stats.avg_tokens_per_sample, row.stats.median_tokens,
                    row.stats.tokens_per_char, row.throughput.samples_per_sec);
      err << line;
      if (row.eval) {
        std::snprintf(line, sizeof line, " %10.4f %10.4f", row.eval->test_acc, row.eval->macro_f1);
        err << line;
      }
      err << '\n';
    }
  }
};

struct PipelineCmd {
  std::string corpus, format = "auto", out_dir, suffixes;
  std::string tokenizers = "whitespace,bengali,generic", grid = "0.25,0.5,1,2,4";
  std::string ratios = "0.7,0.1,0.2";
  std::size_t vocab_size = 8000, warmup = 100, repeats = 3, threads = 1, max_malformed = 10;
  std::uint64_t seed = kDefaultSeed, min_pair_freq = 2;
  NormalizationFlags norm;

  void run(Streams& io) const {
    const auto config = norm.config();
    config.validate();
    const auto input = read_input(corpus, io.in);
    LoadOptions load;
    load.normalization = config;
    load.max_malformed = max_malformed;
    load.threads = clamp_threads(threads);
    std::istringstream stream(input.bytes);
    auto loaded = read_labeled_corpus(stream, SplitCmd::resolve_format(format, corpus), load);
    for (const auto& m : loaded.malformed) io.err << corpus << ": skipped " << m << '\n';
    const auto labeled = stratified_split(std::move(loaded.samples), SplitCmd::parse_ratios(ratios), seed);
    const auto split_dir = (fs::path(out_dir) / "split").string();
    write_split_dir(labeled, split_dir);
    io.err << "pipeline: " << labeled.samples.size() << " samples, " << labeled.label_names.size()
           << " classes, " << loaded.dropped_count << " dropped\n";

    Manifest m("pipeline");
    m.seed(seed);
    m.input(corpus, input.bytes);

    std::vector<NormalizedText> train_texts;
    for (const auto* s : labeled.split(Split::kTrain)) train_texts.push_back(s->text);
    std::vector<TokenizerHandle> handles;
    for (const auto& name : split_list(tokenizers)) {
      const auto kind = parse_tokenizer_kind(name);
      if (kind == TokenizerKind::kWhitespace) {
        handles.push_back(TokenizerHandle::whitespace());
        continue;
      }
      TrainingOptions options;
      options.target_vocab_size = vocab_size;
      options.min_pair_freq = min_pair_freq;
      options.threads = clamp_threads(threads);
      options.profile = make_profile(
          kind == TokenizerKind::kBengaliBpe ? ConstraintMode::kBengali : ConstraintMode::kGeneric,
          suffixes, config);
      auto model = std::make_shared<const BpeModel>(train(train_texts, options, config));
      const auto path = (fs::path(out_dir) / (name + ".model")).string();
      const auto bytes = serialize_model(*model);
      write_output(path, bytes, io.out);
      m.output(path, bytes);
      io.err << "pipeline: trained " << name << " model, vocab " << model->vocab_size() << '\n';
      handles.push_back(TokenizerHandle::bpe(kind, std::move(model)));
    }

    std::vector<NormalizedText> texts;
    for (const auto& s : labeled.samples) texts.push_back(s.text);
    CompareOptions options;
    options.include_eval = true;
    options.threads = clamp_threads(threads);
    options.throughput.warmup = std::min(warmup, texts.empty() ? 0 : texts.size() - 1);
    options.throughput.repeats = repeats;
    options.eval.grid = parse_doubles(grid, "--grid");
    const auto result = compare(texts, handles, options, &labeled);
    const auto report_path = (fs::path(out_dir) / "report.json").string();
    write_output(report_path, result.to_json() + "\n", io.out);
    BenchCmd::print_table(result, io.err);

    m.config()["tokenizers"] = tokenizers;
    m.config()["vocab_size"] = vocab_size;
    m.config()["min_pair_freq"] = min_pair_freq;
    m.config()["suffixes"] = suffixes.empty() ? "built-in" : suffixes;
    m.config()["ratios"] = parse_doubles(ratios, "--ratios");
    m.config()["warmup"] = options.throughput.warmup;
    m.config()["repeats"] = repeats;
    m.config()["threads"] = options.threads;
    m.config()["eval"] = eval_options_json(options.eval);
    m.config()["normalization"] = normalization_json(config);
    if (!suffixes.empty()) m.input(suffixes, read_input(suffixes, io.in).bytes);
    for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
      const auto path = (fs::path(split_dir) / (std::string(to_string(s)) + ".csv")).string();
      m.output(path, read_input(path, io.in).bytes);
    }
    m.output(report_path, std::nullopt);
    m.write((fs::path(out_dir) / "manifest.json").string());
  }
};

}  // namespace

std::string format_token_line(const TokenSequence& tokens, bool ids) {
  std::string line;
  std::size_t next_boundary = 0;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    const bool word_start = next_boundary < tokens.word_boundaries.size() &&
                            tokens.word_boundaries[next_boundary] == i;
    if (word_start) ++next_boundary;
    if (i > 0) line += (ids && word_start) ? " | " : " ";
    if (ids) {
      line += std::to_string(tokens.tokens[i].id);
    } else {
      if (word_start) line += kWordMark;
      line += tokens.tokens[i].surface;
    }
  }
  return line;
}

TokenSequence parse_token_line(std::string_view line, const BpeModel* model) {
  TokenSequence seq;
  if (line.empty()) return seq;
  std::vector<std::string_view> pieces;
  for (std::size_t start = 0; start <= line.size();) {
    auto end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end == start) throw Error(ErrorCode::kInvalidArgument, "empty token");
    pieces.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  if (line.starts_with(kWordMark)) {
    for (auto piece : pieces) {
      if (piece.starts_with(kWordMark)) {
        seq.word_boundaries.push_back(seq.tokens.size());
        piece.remove_prefix(kWordMark.size());
      }
      if (piece.empty()) throw Error(ErrorCode::kInvalidArgument, "empty token");
      const auto id = model ? model->id_of(piece).value_or(kUnkId) : kNoVocabId;
      seq.tokens.push_back({std::string(piece), id});
    }
    return seq;
  }
  if (model == nullptr) {
    throw Error(ErrorCode::kMissingModel, "decoding token ids needs --model");
  }
  std::vector<std::int32_t> ids;
  std::vector<std::size_t> boundaries{0};
  for (auto piece : pieces) {
    if (piece == "|") {
      if (ids.empty() || boundaries.back() == ids.size()) {
        throw Error(ErrorCode::kInvalidArgument, "empty word in id line");
      }
      boundaries.push_back(ids.size());
      continue;
    }
    std::int32_t id = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), id);
    if (ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw Error(ErrorCode::kInvalidArgument, "'" + std::string(piece) + "' is not a token id");
    }
    ids.push_back(id);
  }
  if (boundaries.back() == ids.size()) throw Error(ErrorCode::kInvalidArgument, "empty word in id line");
  return tokens_from_ids(ids, boundaries, *model);
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Bengali grapheme-aware BPE tokenizer toolkit", "bnbpe"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  NormalizeCmd normalize;
  auto* c = app.add_subcommand("normalize", "Clean and NFKC-normalize text, one line per line");
  c->add_option("--in", normalize.in, "Input file or -")->capture_default_str();
  c->add_option("--out", normalize.out, "Output file or -")->capture_default_str();
  c->add_option("--threads", normalize.threads)->capture_default_str();
  normalize.norm.add_to(c);

  GraphemesCmd graphemes;
  c = app.add_subcommand("graphemes", "Print the grapheme clusters of each normalized line, space-separated");
  c->add_option("--in", graphemes.in)->capture_default_str();
  c->add_option("--out", graphemes.out)->capture_default_str();
  c->add_flag("--json", graphemes.as_json, "One JSON array of clusters per line");
  graphemes.norm.add_to(c);

  SplitCmd split;
  c = app.add_subcommand("split", "Stratified train/val/test split of a labeled corpus");
  c->add_option("--in", split.in, "Labeled CSV (text,label) or JSONL")->required();
  c->add_option("--format", split.format)->check(CLI::IsMember({"auto", "csv", "jsonl"}))->capture_default_str();
  c->add_option("--seed", split.seed)->capture_default_str();
  c->add_option("--ratios", split.ratios, "train,val,test")->capture_default_str();
  c->add_option("--out-dir", split.out_dir)->required();
  c->add_option("--max-malformed", split.max_malformed)->capture_default_str();
  c->add_option("--threads", split.threads)->capture_default_str();
  split.norm.add_to(c);

  TrainCmd train_cmd;
  c = app.add_subcommand("train", "Train a BPE model");
  c->add_option("--corpus", train_cmd.corpus, "Text lines, labeled CSV/JSONL, or split directory")->required();
  c->add_option("--format", train_cmd.format)->check(CLI::IsMember({"auto", "text", "csv", "jsonl"}))->capture_default_str();
  c->add_option("--vocab-size", train_cmd.vocab_size)->capture_default_str();
  c->add_option("--mode", train_cmd.mode)->check(CLI::IsMember({"bengali", "generic"}))->capture_default_str();
  c->add_option("--suffixes", train_cmd.suffixes, "Suffix lexicon file (default: built-in)");
  c->add_option("--min-pair-freq", train_cmd.min_pair_freq)->capture_default_str();
  c->add_option("--out", train_cmd.out, "Model file or -")->required();
  c->add_option("--threads", train_cmd.threads)->capture_default_str();
  train_cmd.norm.add_to(c);

  EncodeCmd encode_cmd;
  c = app.add_subcommand("encode", "Encode text lines into tokens");
  c->add_option("--model", encode_cmd.model_path)->required();
  c->add_option("--in", encode_cmd.in)->capture_default_str();
  c->add_option("--out", encode_cmd.out)->capture_default_str();
  c->add_flag("--ids", encode_cmd.ids, "Emit token ids instead of surfaces");
  c->add_option("--threads", encode_cmd.threads)->capture_default_str();

  DecodeCmd decode_cmd;
  c = app.add_subcommand("decode", "Decode token lines back to normalized text");
  c->add_option("--model", decode_cmd.model_path, "Required for id lines");
  c->add_option("--in", decode_cmd.in)->capture_default_str();
  c->add_option("--out", decode_cmd.out)->capture_default_str();

  EvalCmd eval_cmd;
  c = app.add_subcommand("eval", "TF-IDF + logistic regression evaluation on a split directory");
  c->add_option("--corpus", eval_cmd.corpus, "Directory with train/val/test.csv")->required();
  c->add_option("--tokenizer", eval_cmd.tokenizer)->check(CLI::IsMember({"whitespace", "bengali", "generic"}))->capture_default_str();
  c->add_option("--model", eval_cmd.model_path);
  c->add_option("--grid", eval_cmd.grid)->capture_default_str();
  c->add_option("--max-iter", eval_cmd.max_iter)->capture_default_str();
  c->add_option("--tol", eval_cmd.tol)->capture_default_str();
  c->add_option("--report", eval_cmd.report)->capture_default_str();
  c->add_option("--threads", eval_cmd.threads)->capture_default_str();

  BenchCmd bench_cmd;
  c = app.add_subcommand("bench", "Tokenization statistics, throughput and optional evaluation");
  c->add_option("--corpus", bench_cmd.corpus, "Text lines, or a split directory")->required();
  c->add_option("--tokenizers", bench_cmd.tokenizers)->capture_default_str();
  c->add_option("--models", bench_cmd.models, "kind=path or paths in tokenizer order, comma-separated");
  c->add_option("--report", bench_cmd.report)->capture_default_str();
  c->add_option("--warmup", bench_cmd.warmup)->capture_default_str();
  c->add_option("--repeats", bench_cmd.repeats)->capture_default_str();
  c->add_option("--grid", bench_cmd.grid)->capture_default_str();
  c->add_flag("--with-eval", bench_cmd.with_eval);
  c->add_option("--threads", bench_cmd.threads)->capture_default_str();
  c->add_option("--throughput-threads", bench_cmd.throughput_threads)->capture_default_str();
  bench_cmd.norm.add_to(c);

  PipelineCmd pipeline;
  c = app.add_subcommand("pipeline", "Split, train, tokenize, vectorize, classify and report");
  c->add_option("--corpus", pipeline.corpus, "Labeled CSV (text,label) or JSONL")->required();
  c->add_option("--format", pipeline.format)->check(CLI::IsMember({"auto", "csv", "jsonl"}))->capture_default_str();
  c->add_option("--out-dir", pipeline.out_dir)->required();
  c->add_option("--tokenizers", pipeline.tokenizers)->capture_default_str();
  c->add_option("--vocab-size", pipeline.vocab_size)->capture_default_str();
  c->add_option("--min-pair-freq", pipeline.min_pair_freq)->capture_default_str();
  c->add_option("--suffixes", pipeline.suffixes);
  c->add_option("--seed", pipeline.seed)->capture_default_str();
  c->add_option("--ratios", pipeline.ratios)->capture_default_str();
  c->add_option("--grid", pipeline.grid)->capture_default_str();
  c->add_option("--warmup", pipeline.warmup)->capture_default_str();
  c->add_option("--repeats", pipeline.repeats)->capture_default_str();
  c->add_option("--max-malformed", pipeline.max_malformed)->capture_default_str();
  c->add_option("--threads", pipeline.threads)->capture_default_str();
  pipeline.norm.add_to(c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  Streams io{in, out, err};
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "normalize") normalize.run(io);
    else if (name == "graphemes") graphemes.run(io);
    else if (name == "split") split.run(io);
    else if (name == "train") train_cmd.run(io);
    else if (name == "encode") encode_cmd.run(io);
    else if (name == "decode") decode_cmd.run(io);
    else if (name == "eval") eval_cmd.run(io);
    else if (name == "bench") bench_cmd.run(io);
    else if (name == "pipeline") pipeline.run(io);
  } catch (const Error& e) {
    err << "bnbpe " << name << ": error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "bnbpe " << name << ": error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace bnbpe::cli
