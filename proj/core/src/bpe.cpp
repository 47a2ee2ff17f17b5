#include "bnbpe/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "bnbpe/errors.hpp"
#include "bnbpe/grapheme.hpp"
#include "bnbpe/hash.hpp"
#include "bnbpe/parallel.hpp"
#include "bnbpe/utf8.hpp"

namespace bnbpe {
namespace {

constexpr std::string_view kGraphemeGrammarVersion = "graphemes-v1";

constexpr std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Must stay in sync with data/suffixes_bn.txt (checked by a test).
constexpr std::string_view kDefaultSuffixes[] = {
    "রা", "এরা", "গুলো", "গুলি", "গুলা", "দের", "দিগকে", "সমূহ", "গণ", "বৃন্দ",
    "কে", "রে", "র", "এর", "তে", "য়", "এ",
    "টা", "টি", "টুকু", "খানা", "খানি",
    "ই", "ও",
};

// reachable[i] is true when surface[offsets[i]..] is a suffix stack; the last
// entry (offset == size) is the empty tail and always reachable.
std::vector<bool> stack_tails(std::string_view surface, const std::vector<std::size_t>& offsets,
                              const std::set<std::string>& lexicon) {
  std::vector<bool> reachable(offsets.size(), false);
  reachable.back() = true;
  for (std::size_t i = offsets.size() - 1; i-- > 0;) {
    const std::string_view tail = surface.substr(offsets[i]);
    for (const auto& entry : lexicon) {
      if (entry.size() > tail.size() || !tail.starts_with(entry)) continue;
      const std::size_t end = offsets[i] + entry.size();
      auto it = std::lower_bound(offsets.begin() + static_cast<std::ptrdiff_t>(i), offsets.end(), end);
      if (it != offsets.end() && *it == end &&
          reachable[static_cast<std::size_t>(it - offsets.begin())]) {
        reachable[i] = true;
        break;
      }
    }
  }
  return reachable;
}

std::vector<std::size_t> cluster_offsets(std::string_view surface) {
  std::vector<std::size_t> offsets;
  for (const auto& span : cluster_spans(surface)) offsets.push_back(span.offset);
  offsets.push_back(surface.size());
  return offsets;
}

}  // namespace

const char* to_string(ConstraintMode mode) {
  return mode == ConstraintMode::kBengali ? "bengali" : "generic";
}

ConstraintMode parse_constraint_mode(std::string_view text) {
  if (text == "bengali") return ConstraintMode::kBengali;
  if (text == "generic") return ConstraintMode::kGeneric;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + std::string(text) + "'");
}

bool ConstraintProfile::is_suffix_stack(std::string_view surface) const {
  if (surface.empty() || suffix_lexicon.empty()) return false;
  return stack_tails(surface, cluster_offsets(surface), suffix_lexicon).front();
}

std::uint64_t ConstraintProfile::lexicon_hash() const {
  Fnv1a64 h;
  for (const auto& entry : suffix_lexicon) h.update(entry).update("\n");
  return h.digest();
}

std::string ConstraintProfile::canonical() const {
  return std::string("mode=") + to_string(mode) + ";lexicon=" + to_hex(lexicon_hash());
}

std::set<std::string> default_suffix_lexicon(const NormalizationConfig& config) {
  std::set<std::string> out;
  for (auto entry : kDefaultSuffixes) {
    auto normalized = clean(entry, config);
    if (!normalized.empty()) out.insert(normalized.content());
  }
  return out;
}

std::set<std::string> parse_suffix_lexicon(std::istream& in, const NormalizationConfig& config) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    auto normalized = clean(line, config);
    if (!normalized.empty()) out.insert(normalized.content());
  }
  return out;
}

std::set<std::string> load_suffix_lexicon(const std::string& path,
                                          const NormalizationConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open suffix lexicon '" + path + "'");
  return parse_suffix_lexicon(in, config);
}

bool is_merge_allowed(std::string_view left, std::string_view right, MergeContext context,
                      const ConstraintProfile& profile) {
  if (context.crosses_word_boundary) return false;
  if (left.empty() || right.empty()) return false;
  if (starts_with_combining_mark(left)) return false;
  if (profile.mode == ConstraintMode::kGeneric || !context.word_final) return true;
  if (profile.suffix_lexicon.empty()) return true;

  const std::string merged = std::string(left) + std::string(right);
  const auto offsets = cluster_offsets(merged);
  const auto tails = stack_tails(merged, offsets, profile.suffix_lexicon);
  if (tails.front()) return true;  // the whole thing is a suffix stack
  for (std::size_t i = 1; i + 1 < offsets.size(); ++i) {
    if (tails[i]) return false;
  }
  return true;
}

bool is_merge_allowed(const Symbol& left, const Symbol& right, MergeContext context,
                      const ConstraintProfile& profile) {
  return is_merge_allowed(left.surface, right.surface, context, profile);
}

std::vector<WordUnit> pretokenize(std::string_view normalized) {
  std::vector<WordUnit> units;
  std::size_t pos = 0;
  std::size_t run_start = std::string_view::npos;
  bool word_start = true;
  auto flush = [&](std::size_t end) {
    if (run_start != std::string_view::npos && end > run_start) {
      units.push_back({normalized.substr(run_start, end - run_start), word_start});
      word_start = false;
    }
    run_start = std::string_view::npos;
  };
  while (pos < normalized.size()) {
    const std::size_t begin = pos;
    const char32_t cp = next_codepoint(normalized, pos);
    const auto cls = classify_codepoint(cp);
    if (cls == CodepointClass::kSpace) {
      flush(begin);
      word_start = true;
    } else if (cls == CodepointClass::kPunctuation) {
      flush(begin);
      units.push_back({normalized.substr(begin, pos - begin), word_start});
      word_start = false;
    } else if (run_start == std::string_view::npos) {
      run_start = begin;
    }
  }
  flush(normalized.size());
  return units;
}

std::vector<WordUnit> pretokenize(const NormalizedText& text) { return pretokenize(text.content()); }

std::vector<std::string> TokenSequence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::int32_t> TokenSequence::ids() const {
  std::vector<std::int32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.id);
  return out;
}

// ---------------------------------------------------------------------------
// BpeModel

std::uint64_t model_config_fingerprint(const NormalizationConfig& normalization,
                                       const ConstraintProfile& profile,
                                       std::size_t target_vocab_size,
                                       std::uint64_t min_pair_freq) {
  Fnv1a64 h;
  h.update(normalization.canonical()).update("|").update(kGraphemeGrammarVersion).update("|");
  h.update(profile.canonical()).update("|");
  h.update_u64(target_vocab_size).update_u64(min_pair_freq);
  return h.digest();
}

BpeModel BpeModel::assemble(std::vector<std::string> alphabet, std::vector<MergeRule> merges,
                            ConstraintProfile profile, std::size_t target_vocab_size,
                            std::uint64_t min_pair_freq, NormalizationConfig normalization) {
  auto corrupt = [](const std::string& what) { return Error(ErrorCode::kCorruptFile, what); };

  BpeModel m;
  std::sort(alphabet.begin(), alphabet.end());
  if (std::adjacent_find(alphabet.begin(), alphabet.end()) != alphabet.end()) {
    throw corrupt("alphabet contains duplicate symbols");
  }
  for (const auto& g : alphabet) {
    if (g.empty() || cluster_spans(g).size() != 1) {
      throw corrupt("alphabet entry '" + g + "' is not a single grapheme cluster");
    }
  }

  m.id_to_surface_.reserve(kFirstSymbolId + alphabet.size() + merges.size());
  m.id_to_surface_.emplace_back(kUnkSurface);
  m.id_to_surface_.emplace_back(kPadSurface);
  for (auto& g : alphabet) m.id_to_surface_.push_back(g);
  for (std::size_t i = 0; i < m.id_to_surface_.size(); ++i) {
    m.surface_to_id_.emplace(m.id_to_surface_[i], static_cast<std::int32_t>(i));
  }

  m.allowed_mid_.reserve(merges.size());
  m.allowed_final_.reserve(merges.size());
  for (std::size_t rank = 0; rank < merges.size(); ++rank) {
    auto& rule = merges[rank];
    if (rule.rank != rank) throw corrupt("merge ranks are not contiguous from 0");
    const auto left = m.surface_to_id_.find(rule.left);
    const auto right = m.surface_to_id_.find(rule.right);
    if (left == m.surface_to_id_.end() || right == m.surface_to_id_.end()) {
      throw corrupt("merge " + std::to_string(rank) + " uses a surface not in the vocabulary");
    }
    if (left->second < kFirstSymbolId || right->second < kFirstSymbolId) {
      throw corrupt("merge " + std::to_string(rank) + " uses a reserved special");
    }
    std::string merged = rule.merged();
    const auto id = static_cast<std::int32_t>(m.id_to_surface_.size());
    if (!m.surface_to_id_.emplace(merged, id).second) {
      throw corrupt("merge " + std::to_string(rank) + " produces duplicate surface '" + merged + "'");
    }
    if (!m.pair_rank_.emplace(pair_key(left->second, right->second), static_cast<std::int32_t>(rank))
             .second) {
      throw corrupt("merge " + std::to_string(rank) + " repeats an earlier pair");
    }
    m.id_to_surface_.push_back(std::move(merged));
    m.allowed_mid_.push_back(is_merge_allowed(rule.left, rule.right, {false, false}, profile));
    m.allowed_final_.push_back(is_merge_allowed(rule.left, rule.right, {true, false}, profile));
  }

  if (alphabet.size() + merges.size() > target_vocab_size) {
    throw corrupt("vocabulary exceeds target_vocab_size");
  }

  m.alphabet_ = std::move(alphabet);
  m.merges_ = std::move(merges);
  m.profile_ = std::move(profile);
  m.normalization_ = std::move(normalization);
  m.target_vocab_size_ = target_vocab_size;
  m.min_pair_freq_ = min_pair_freq;
  m.config_fingerprint_ =
      model_config_fingerprint(m.normalization_, m.profile_, target_vocab_size, min_pair_freq);
  return m;
}

std::optional<std::int32_t> BpeModel::id_of(std::string_view surface) const {
  auto it = surface_to_id_.find(std::string(surface));
  if (it == surface_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& BpeModel::surface_of(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_surface_.size()) {
    return id_to_surface_[kUnkId];
  }
  return id_to_surface_[static_cast<std::size_t>(id)];
}

std::int32_t BpeModel::merge_rank(std::int32_t left, std::int32_t right) const {
  auto it = pair_rank_.find(pair_key(left, right));
  return it == pair_rank_.end() ? -1 : it->second;
}

BpeModel BpeModel::truncated(std::size_t k) const {
  std::vector<MergeRule> merges(merges_.begin(),
                                merges_.begin() + static_cast<std::ptrdiff_t>(std::min(k, merges_.size())));
  return assemble(alphabet_, std::move(merges), profile_, target_vocab_size_, min_pair_freq_,
                  normalization_);
}

// ---------------------------------------------------------------------------
// Training

namespace {

class Trainer {
 public:
  Trainer(const TrainingOptions& options) : options_(options), queue_(CandidateLess{&surfaces_}) {}

  BpeModel run(std::span<const NormalizedText> corpus, const NormalizationConfig& normalization);

 private:
  struct Word {
    std::vector<std::int32_t> symbols;
    std::uint64_t freq;
  };
  struct Candidate {
    std::uint64_t count;
    std::int32_t left;
    std::int32_t right;
  };
  struct CandidateLess {
    const std::vector<std::string>* surfaces;
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.count != b.count) return a.count > b.count;
      // Distinct ids always have distinct surfaces.
      const auto& s = *surfaces;
      if (a.left != b.left) return s[a.left] < s[b.left];
      if (a.right != b.right) return s[a.right] < s[b.right];
      return false;
    }
  };

  void count_words(std::span<const NormalizedText> corpus);
  std::int32_t intern(std::string_view surface);
  bool allowed_at(const Word& w, std::size_t i);
  bool allowed_final(std::int32_t a, std::int32_t b);
  void add_pairs(std::uint32_t word_index, std::int64_t sign);
  void adjust(std::uint64_t key, std::int64_t delta);

  const TrainingOptions& options_;
  std::vector<std::string> surfaces_;
  std::vector<bool> starts_mark_;
  std::unordered_map<std::string, std::int32_t> ids_;
  std::vector<Word> words_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where_;
  std::unordered_map<std::uint64_t, bool> final_cache_;
  std::unordered_set<std::uint64_t> dead_;
  std::set<Candidate, CandidateLess> queue_;
};

void Trainer::count_words(std::span<const NormalizedText> corpus) {
  const std::size_t threads = std::max<std::size_t>(1, options_.threads);
  std::vector<std::unordered_map<std::string, std::uint64_t>> partial(threads);
  parallel_chunks(corpus.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t t) {
    auto& counts = partial[t];
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& unit : pretokenize(corpus[i])) ++counts[std::string(unit.text)];
    }
  });
  std::map<std::string, std::uint64_t> merged;
  for (auto& p : partial) {
    for (auto& [word, n] : p) merged[word] += n;
  }

  std::set<std::string> alphabet;
  std::vector<std::vector<std::string_view>> split;
  split.reserve(merged.size());
  for (const auto& [word, n] : merged) {
    split.push_back(split_graphemes(word));
    for (auto g : split.back()) alphabet.emplace(g);
  }

  surfaces_.emplace_back(kUnkSurface);
  surfaces_.emplace_back(kPadSurface);
  starts_mark_.assign(2, false);
  for (const auto& g : alphabet) intern(g);

  words_.reserve(merged.size());
  std::size_t i = 0;
  for (const auto& [word, n] : merged) {
    Word w{{}, n};
    for (auto g : split[i]) w.symbols.push_back(ids_.at(std::string(g)));
    words_.push_back(std::move(w));
    ++i;
  }
}

std::int32_t Trainer::intern(std::string_view surface) {
  const auto id = static_cast<std::int32_t>(surfaces_.size());
  surfaces_.emplace_back(surface);
  starts_mark_.push_back(starts_with_combining_mark(surface));
  ids_.emplace(surfaces_.back(), id);
  return id;
}

bool Trainer::allowed_final(std::int32_t a, std::int32_t b) {
  if (options_.profile.mode == ConstraintMode::kGeneric) return true;
  const auto key = pair_key(a, b);
  auto it = final_cache_.find(key);
  if (it != final_cache_.end()) return it->second;
  const bool ok = is_merge_allowed(surfaces_[a], surfaces_[b], {true, false}, options_.profile);
  final_cache_.emplace(key, ok);
  return ok;
}

bool Trainer::allowed_at(const Word& w, std::size_t i) {
  const auto a = w.symbols[i];
  const auto b = w.symbols[i + 1];
  if (starts_mark_[a]) return false;
  return i + 2 < w.symbols.size() || allowed_final(a, b);
}

void Trainer::adjust(std::uint64_t key, std::int64_t delta) {
  auto& count = counts_[key];
  const auto a = static_cast<std::int32_t>(key >> 32);
  const auto b = static_cast<std::int32_t>(key & 0xffffffffu);
  const bool live = !dead_.contains(key);
  if (live && count > 0) queue_.erase(Candidate{count, a, b});
  count = static_cast<std::uint64_t>(static_cast<std::int64_t>(count) + delta);
  if (live && count > 0) queue_.insert(Candidate{count, a, b});
}

void Trainer::add_pairs(std::uint32_t word_index, std::int64_t sign) {
  const Word& w = words_[word_index];
  for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
    if (!allowed_at(w, i)) continue;
    const auto key = pair_key(w.symbols[i], w.symbols[i + 1]);
    adjust(key, sign * static_cast<std::int64_t>(w.freq));
    if (sign > 0) where_[key].push_back(word_index);
  }
}

BpeModel Trainer::run(std::span<const NormalizedText> corpus,
                      const NormalizationConfig& normalization) {
  const auto fp = normalization.fingerprint();
  for (const auto& text : corpus) {
    if (text.fingerprint() != fp) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "training text normalized with " + to_hex(text.fingerprint()) +
                      ", expected " + to_hex(fp));
    }
  }
  count_words(corpus);
  const std::size_t alphabet_size = surfaces_.size() - kFirstSymbolId;
  if (words_.empty() || alphabet_size == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus has no tokens after normalization");
  }
  if (options_.target_vocab_size <= alphabet_size) {
    throw Error(ErrorCode::kTargetTooSmall,
                "target_vocab_size " + std::to_string(options_.target_vocab_size) +
                    " must exceed the alphabet size " + std::to_string(alphabet_size));
  }

  for (std::uint32_t i = 0; i < words_.size(); ++i) add_pairs(i, +1);

  std::vector<MergeRule> merges;
  std::vector<std::uint32_t> stamp(words_.size(), UINT32_MAX);
  const std::uint64_t min_freq = std::max<std::uint64_t>(1, options_.min_pair_freq);

  while (alphabet_size + merges.size() < options_.target_vocab_size && !queue_.empty()) {
    const Candidate best = *queue_.begin();
    if (best.count < min_freq) break;
    const auto key = pair_key(best.left, best.right);
    std::string merged = surfaces_[best.left] + surfaces_[best.right];
    if (ids_.contains(merged)) {
      queue_.erase(queue_.begin());
      dead_.insert(key);
      continue;
    }

    const auto rank = static_cast<std::uint32_t>(merges.size());
    merges.push_back({surfaces_[best.left], surfaces_[best.right], rank, best.count});
    const std::int32_t new_id = intern(merged);

    std::vector<std::uint32_t> affected = std::move(where_[key]);
    where_.erase(key);
    for (const std::uint32_t wi : affected) {
      if (stamp[wi] == rank) continue;
      stamp[wi] = rank;
      Word& w = words_[wi];
      bool present = false;
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        if (w.symbols[i] == best.left && w.symbols[i + 1] == best.right) {
          present = true;
          break;
        }
      }
      if (!present) continue;

      add_pairs(wi, -1);
      std::vector<std::int32_t> next;
      next.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size();) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == best.left &&
            w.symbols[i + 1] == best.right && allowed_at(w, i)) {
          next.push_back(new_id);
          i += 2;
        } else {
          next.push_back(w.symbols[i]);
          ++i;
        }
      }
      w.symbols = std::move(next);
      add_pairs(wi, +1);
    }
  }

  std::vector<std::string> alphabet(surfaces_.begin() + kFirstSymbolId,
                                    surfaces_.begin() + kFirstSymbolId +
                                        static_cast<std::ptrdiff_t>(alphabet_size));
  return BpeModel::assemble(std::move(alphabet), std::move(merges), options_.profile,
                            options_.target_vocab_size, options_.min_pair_freq, normalization);
}

}  // namespace

BpeModel train(std::span<const NormalizedText> corpus, const TrainingOptions& options,
               const NormalizationConfig& normalization) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training texts");
  Trainer trainer(options);
  return trainer.run(corpus, normalization);
}

// ---------------------------------------------------------------------------
// Encoding

void encode_unit(std::string_view unit, const BpeModel& model, std::vector<Token>& out) {
  const auto graphemes = split_graphemes(unit);
  std::vector<std::int32_t> symbols;
  symbols.reserve(graphemes.size());
  for (auto g : graphemes) symbols.push_back(model.id_of(g).value_or(kUnkId));

  while (symbols.size() > 1) {
    std::int32_t best_rank = -1;
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      if (symbols[i] == kUnkId || symbols[i + 1] == kUnkId) continue;
      const std::int32_t rank = model.merge_rank(symbols[i], symbols[i + 1]);
      if (rank < 0 || (best_rank >= 0 && rank >= best_rank)) continue;
      if (!model.rule_allowed(static_cast<std::size_t>(rank), i + 2 == symbols.size())) continue;
      best_rank = rank;
      best_pos = i;
    }
    if (best_rank < 0) break;
    symbols[best_pos] = model.first_merge_id() + best_rank;
    symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
  }

  // UNK symbols never merge, so they still line up with their grapheme.
  std::size_t g = 0;
  for (const auto id : symbols) {
    if (id == kUnkId) {
      out.push_back({std::string(graphemes[g]), kUnkId});
      ++g;
    } else {
      const auto& surface = model.surface_of(id);
      out.push_back({surface, id});
      std::size_t covered = 0;
      while (covered < surface.size()) covered += graphemes[g++].size();
    }
  }
}

TokenSequence encode(const NormalizedText& text, const BpeModel& model) {
  if (text.fingerprint() != model.normalization_fingerprint()) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "text normalized with " + to_hex(text.fingerprint()) + ", model expects " +
                    to_hex(model.normalization_fingerprint()));
  }
  TokenSequence seq;
  for (const auto& unit : pretokenize(text)) {
    if (unit.starts_word) seq.word_boundaries.push_back(seq.tokens.size());
    encode_unit(unit.text, model, seq.tokens);
  }
  return seq;
}

std::string decode(const TokenSequence& tokens) {
  std::string out;
  std::size_t next_boundary = 0;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    if (next_boundary < tokens.word_boundaries.size() && tokens.word_boundaries[next_boundary] == i) {
      if (i > 0) out.push_back(' ');
      ++next_boundary;
    }
    out += tokens.tokens[i].surface;
  }
  return out;
}

TokenSequence tokens_from_ids(std::span<const std::int32_t> ids,
                              std::span<const std::size_t> word_boundaries,
                              const BpeModel& model) {
  TokenSequence seq;
  seq.word_boundaries.assign(word_boundaries.begin(), word_boundaries.end());
  for (const auto id : ids) seq.tokens.push_back({model.surface_of(id), id});
  return seq;
}

}  // namespace bnbpe
