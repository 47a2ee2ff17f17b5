#include <gtest/gtest.h>

#include <sstream>

#include "bnbpe/model_io.hpp"
#include "fixtures.hpp"

namespace bnbpe {
namespace {

using testing::error_code_of;

std::string bytes_of(const BpeModel& m) {
  std::ostringstream os;
  write_model(m, os);
  return os.str();
}

BpeModel parse(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

const BpeModel& toy_model() {
  static const BpeModel model = [] {
    TrainingOptions o;
    o.profile = {ConstraintMode::kGeneric, {}};
    o.target_vocab_size = 100;
    return train(testing::normalize_all({"কলম", "কলম", "কলা"}), o, {});
  }();
  return model;
}

const BpeModel& sample_bengali_model() {
  static const BpeModel model = [] {
    TrainingOptions o;
    o.profile = {ConstraintMode::kBengali, default_suffix_lexicon()};
    o.target_vocab_size = 1200;
    return train(testing::sample_corpus(), o, {});
  }();
  return model;
}

TEST(ModelIo, ToyModelLayout) {
  const auto text = bytes_of(toy_model());
  EXPECT_TRUE(text.starts_with("format_version: 1\n"));
  EXPECT_NE(text.find("mode: generic\n"), std::string::npos);
  EXPECT_NE(text.find("[merges]\nক\tল\nকল\tম\n"), std::string::npos);
  EXPECT_NE(text.find("[vocab]\n<unk>\t0\n<pad>\t1\nক\t2\n"), std::string::npos);
  EXPECT_TRUE(text.ends_with("কলম\t7\n[merges]\nক\tল\nকল\tম\n"));
}

TEST(ModelIo, SaveLoadSaveIsByteIdentical) {
  for (const BpeModel* model : {&toy_model(), &sample_bengali_model()}) {
    testing::TempDir dir("model-io");
    save_model(*model, dir.file("a.model"));
    const auto loaded = load_model(dir.file("a.model"));
    save_model(loaded, dir.file("b.model"));
    EXPECT_EQ(testing::read_file(dir.file("a.model")), testing::read_file(dir.file("b.model")));
    EXPECT_EQ(loaded.profile(), model->profile());
    EXPECT_EQ(loaded.normalization(), model->normalization());
    EXPECT_EQ(loaded.config_fingerprint(), model->config_fingerprint());
    EXPECT_EQ(loaded.vocab_size(), model->vocab_size());
  }
}

TEST(ModelIo, ZeroMergeModelRoundTrips) {
  const auto empty = toy_model().truncated(0);
  const auto text = bytes_of(empty);
  EXPECT_TRUE(text.ends_with("[merges]\n"));
  EXPECT_EQ(bytes_of(parse(text)), text);
  EXPECT_EQ(parse(text).merges().size(), 0u);
}

TEST(ModelIo, LoadedModelEncodesIdentically) {
  const auto& model = sample_bengali_model();
  const auto loaded = parse(bytes_of(model));
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& text = testing::sample_corpus()[i];
    ASSERT_EQ(encode(text, loaded), encode(text, model));
  }
}

TEST(ModelIo, TruncatedFileIsCorrupt) {
  const auto text = bytes_of(sample_bengali_model());
  for (std::size_t cut : {text.size() / 2, text.size() - 3, std::size_t{40}}) {
    EXPECT_EQ(error_code_of([&] { parse(text.substr(0, cut)); }), ErrorCode::kCorruptFile) << cut;
  }
  EXPECT_EQ(error_code_of([&] { parse(""); }), ErrorCode::kCorruptFile);
}

TEST(ModelIo, FutureVersionRejected) {
  auto text = bytes_of(toy_model());
  text.replace(0, std::string("format_version: 1").size(), "format_version: 2");
  EXPECT_EQ(error_code_of([&] { parse(text); }), ErrorCode::kVersionMismatch);
}

TEST(ModelIo, TamperingIsDetected) {
  const auto text = bytes_of(toy_model());
  auto tamper = [&](const std::string& from, const std::string& to) {
    auto copy = text;
    const auto pos = copy.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    copy.replace(pos, from.size(), to);
    return error_code_of([&] { parse(copy); });
  };
  EXPECT_EQ(tamper("target_vocab_size: 100", "target_vocab_size: 101"), ErrorCode::kCorruptFile);
  EXPECT_EQ(tamper("merge_count: 2", "merge_count: 3"), ErrorCode::kCorruptFile);
  EXPECT_EQ(tamper("ক\t2\n", "খ\t2\n"), ErrorCode::kCorruptFile);
  EXPECT_EQ(tamper("[merges]\nক\tল", "[merges]\nল\tক"), ErrorCode::kCorruptFile);
  EXPECT_EQ(tamper("mode: generic", "mode: bengali"), ErrorCode::kCorruptFile);
  EXPECT_EQ(tamper("min_pair_freq: 2", "min_pair_freq: two"), ErrorCode::kCorruptFile);
}

TEST(ModelIo, MissingFileIsIoError) {
  EXPECT_EQ(error_code_of([] { load_model("/nonexistent/x.model"); }), ErrorCode::kIo);
  EXPECT_EQ(error_code_of([] { save_model(toy_model(), "/nonexistent/dir/x.model"); }),
            ErrorCode::kIo);
}

}  // namespace
}  // namespace bnbpe
