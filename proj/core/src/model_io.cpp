#include "bnbpe/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "bnbpe/errors.hpp"
#include "bnbpe/hash.hpp"

namespace bnbpe {
namespace {

Error corrupt(const std::string& what) { return Error(ErrorCode::kCorruptFile, what); }

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw corrupt("header '" + key + "' is not an integer: '" + value + "'");
  }
  return v;
}

}  // namespace

void write_model(const BpeModel& model, std::ostream& out) {
  out << "format_version: " << kModelFormatVersion << '\n';
  out << "config_fingerprint: " << to_hex(model.config_fingerprint()) << '\n';
  out << "normalization: " << model.normalization().canonical() << '\n';
  out << "normalization_fingerprint: " << to_hex(model.normalization_fingerprint()) << '\n';
  out << "mode: " << to_string(model.profile().mode) << '\n';
  out << "target_vocab_size: " << model.target_vocab_size() << '\n';
  out << "min_pair_freq: " << model.min_pair_freq() << '\n';
  out << "alphabet_size: " << model.alphabet().size() << '\n';
  out << "merge_count: " << model.merges().size() << '\n';
  out << "vocab_size: " << model.vocab_size() << '\n';
  out << "suffix_lexicon_hash: " << to_hex(model.profile().lexicon_hash()) << '\n';
  out << "[suffixes]\n";
  for (const auto& s : model.profile().suffix_lexicon) out << s << '\n';
  out << "[vocab]\n";
  for (std::size_t id = 0; id < model.vocab_size(); ++id) {
    out << model.surface_of(static_cast<std::int32_t>(id)) << '\t' << id << '\n';
  }
  out << "[merges]\n";
  for (const auto& m : model.merges()) out << m.left << '\t' << m.right << '\n';
}

void save_model(const BpeModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_model(model, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing model to '" + path + "'");
}

BpeModel read_model(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string line;
  std::string section;
  std::vector<std::string> suffixes;
  std::vector<std::pair<std::string, std::string>> vocab_lines;
  std::vector<std::pair<std::string, std::string>> merge_lines;
  bool first = true;

  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (!line.starts_with("format_version: ")) throw corrupt("missing format_version line");
      const auto version = parse_uint("format_version", line.substr(16));
      if (version != kModelFormatVersion) {
        throw Error(ErrorCode::kVersionMismatch,
                    "model format_version " + std::to_string(version) + ", supported " +
                        std::to_string(kModelFormatVersion));
      }
      continue;
    }
    if (line == "[suffixes]" || line == "[vocab]" || line == "[merges]") {
      section = line;
      continue;
    }
    if (section.empty()) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw corrupt("malformed header line '" + line + "'");
      header[line.substr(0, colon)] = line.substr(colon + 2);
    } else if (section == "[suffixes]") {
      if (line.empty()) throw corrupt("empty suffix entry");
      suffixes.push_back(line);
    } else {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
        throw corrupt("malformed " + section + " line '" + line + "'");
      }
      auto& dest = section == "[vocab]" ? vocab_lines : merge_lines;
      dest.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  if (first) throw corrupt("empty model file");
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw corrupt("missing header '" + key + "'");
    return it->second;
  };

  NormalizationConfig normalization;
  try {
    normalization = NormalizationConfig::from_canonical(need("normalization"));
  } catch (const Error& e) {
    throw corrupt(e.detail());
  }
  ConstraintProfile profile;
  try {
    profile.mode = parse_constraint_mode(need("mode"));
  } catch (const Error& e) {
    throw corrupt(e.detail());
  }
  profile.suffix_lexicon.insert(suffixes.begin(), suffixes.end());
  if (profile.suffix_lexicon.size() != suffixes.size()) throw corrupt("duplicate suffix entries");
  if (to_hex(profile.lexicon_hash()) != need("suffix_lexicon_hash")) {
    throw corrupt("suffix lexicon does not match suffix_lexicon_hash");
  }

  const auto target = parse_uint("target_vocab_size", need("target_vocab_size"));
  const auto min_freq = parse_uint("min_pair_freq", need("min_pair_freq"));
  const auto alphabet_size = parse_uint("alphabet_size", need("alphabet_size"));
  const auto merge_count = parse_uint("merge_count", need("merge_count"));
  const auto vocab_size = parse_uint("vocab_size", need("vocab_size"));

  if (merge_lines.size() != merge_count) {
    throw corrupt("merges section has " + std::to_string(merge_lines.size()) +
                  " entries, header says " + std::to_string(merge_count));
  }
  if (vocab_lines.size() != vocab_size) {
    throw corrupt("vocab section has " + std::to_string(vocab_lines.size()) +
                  " entries, header says " + std::to_string(vocab_size));
  }
  if (vocab_size != kFirstSymbolId + alphabet_size + merge_count) {
    throw corrupt("vocab_size != specials + alphabet_size + merge_count");
  }
  for (std::size_t i = 0; i < vocab_lines.size(); ++i) {
    if (vocab_lines[i].second != std::to_string(i)) {
      throw corrupt("vocab ids are not contiguous at line for '" + vocab_lines[i].first + "'");
    }
  }
  if (vocab_size < kFirstSymbolId || vocab_lines[kUnkId].first != kUnkSurface ||
      vocab_lines[kPadId].first != kPadSurface) {
    throw corrupt("reserved specials missing from vocab");
  }

  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < alphabet_size; ++i) alphabet.push_back(vocab_lines[kFirstSymbolId + i].first);
  if (!std::is_sorted(alphabet.begin(), alphabet.end())) throw corrupt("alphabet is not sorted");
  std::vector<MergeRule> merges;
  for (std::size_t r = 0; r < merge_lines.size(); ++r) {
    merges.push_back({merge_lines[r].first, merge_lines[r].second, r, 0});
  }

  BpeModel model = BpeModel::assemble(std::move(alphabet), std::move(merges), std::move(profile),
                                      target, min_freq, std::move(normalization));
  for (std::size_t i = 0; i < vocab_lines.size(); ++i) {
    if (model.surface_of(static_cast<std::int32_t>(i)) != vocab_lines[i].first) {
      throw corrupt("vocab entry " + std::to_string(i) + " does not match its merge");
    }
  }
  if (to_hex(model.normalization_fingerprint()) != need("normalization_fingerprint")) {
    throw corrupt("normalization_fingerprint does not match normalization");
  }
  if (to_hex(model.config_fingerprint()) != need("config_fingerprint")) {
    throw corrupt("config_fingerprint does not match the recorded configuration");
  }
  return model;
}

BpeModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model '" + path + "'");
  try {
    return read_model(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

}  // namespace bnbpe
