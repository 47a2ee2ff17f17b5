#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bnbpe/corpus.hpp"
#include "bnbpe/errors.hpp"
#include "bnbpe/normalizer.hpp"
#include "bnbpe/utf8.hpp"

namespace bnbpe::testing {

inline std::string data_path(const std::string& name) {
  return (std::filesystem::path(BNBPE_DATA_DIR) / name).string();
}

inline std::string test_data_path(const std::string& name) {
  return (std::filesystem::path(BNBPE_TEST_DATA_DIR) / name).string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

// Code of the bnbpe::Error thrown by `fn`, or nullopt if it returns normally.
inline std::optional<ErrorCode> error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline const std::vector<NormalizedText>& sample_corpus() {
  static const auto texts = load_text_lines(data_path("sample_corpus.txt"), NormalizationConfig{});
  return texts;
}

inline std::vector<NormalizedText> normalize_all(const std::vector<std::string>& lines,
                                                 const NormalizationConfig& config = {}) {
  std::vector<NormalizedText> out;
  for (const auto& l : lines) out.push_back(clean(l, config));
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("bnbpe-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Random raw strings weighted towards the Bengali block, with the marks,
// joiners, spaces, punctuation and foreign code points that stress the
// normalizer and segmenter.
inline std::string random_raw_text(std::mt19937_64& rng, std::size_t max_len = 24) {
  static const std::vector<char32_t> extras = {
      U' ', U' ', U' ', U'\t', 0x00A0, 0x0964, 0x0965, U'.', U',', U'?', U'!', U'-', U'"',
      0x200C, 0x200D, U'a', U'Z', U'7', 0x0301, 0x1F600, 0xFB01, 0x2460, 0x3000,
  };
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<char32_t> bengali(0x0980, 0x09FF);
  std::uniform_int_distribution<std::size_t> extra(0, extras.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    append_utf8(s, pick(rng) < 7 ? bengali(rng) : extras[extra(rng)]);
  }
  return s;
}

}  // namespace bnbpe::testing
