#include "duet/io.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "duet/error.hpp"

namespace duet {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("duet_io_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  ErrorCode code_of(auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::kIoError;
  }

  fs::path dir_;
  std::vector<std::string> warnings_;
  WarningSink sink_ = [this](std::string_view m) { warnings_.emplace_back(m); };
};

TEST_F(IoTest, InteractionsBasic) {
  const auto x = load_interactions(
      write("x.tsv", "# comment\nu1\ti1\nu1\ti2\t1\nu2\ti3\t0\n\nu3\ti1\n"), sink_);
  EXPECT_EQ(x.user_labels(), (std::vector<std::string>{"u1", "u2", "u3"}));
  EXPECT_EQ(x.item_labels(), (std::vector<std::string>{"i1", "i2", "i3"}));
  EXPECT_EQ(x.nnz(), 3u);
  EXPECT_TRUE(x.contains(0, 1));
  EXPECT_FALSE(x.contains(1, 2));
  EXPECT_TRUE(warnings_.empty());
}

TEST_F(IoTest, InteractionsDuplicatesWarned) {
  const auto x = load_interactions(write("x.tsv", "a\tb\na\tb\n"), sink_);
  EXPECT_EQ(x.nnz(), 1u);
  ASSERT_EQ(warnings_.size(), 1u);
  EXPECT_NE(warnings_[0].find(":2"), std::string::npos);
}

TEST_F(IoTest, InteractionsErrors) {
  EXPECT_EQ(code_of([&] { load_interactions(write("e.tsv", ""), sink_); }),
            ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { load_interactions(write("z.tsv", "a\tb\t0\n"), sink_); }),
            ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { load_interactions(write("b.tsv", "a\tb\t2\n"), sink_); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_interactions(write("c.tsv", "a b\n"), sink_); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_interactions(dir_ / "missing.tsv", sink_); }),
            ErrorCode::kIoError);
  try {
    load_interactions(write("d.tsv", "a\tb\nc\td\t7\n"), sink_);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("d.tsv:2"), std::string::npos);
  }
}

InteractionMatrix small_dataset() {
  return InteractionMatrix({"u1", "u2"}, {"i1", "i2", "i3"}, {{0, 0}, {1, 2}});
}

TEST_F(IoTest, DenseItemSideAligned) {
  const auto x = small_dataset();
  const auto side = load_side(write("s.tsv", "\ti3\ti1\nf1\t1\t0.5\nf2\t0\t2\n"),
                              SideRole::kItemSide, false, x, sink_);
  EXPECT_EQ(side.role(), SideRole::kItemSide);
  const auto& m = side.matrix();
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(0, 0), 0.5);
  EXPECT_EQ(m(0, 1), 0.0);  // i2 absent from file
  EXPECT_EQ(m(0, 2), 1.0);
  EXPECT_EQ(m(1, 0), 2.0);
}

TEST_F(IoTest, EdgeListUserSide) {
  const auto x = small_dataset();
  const auto side = load_side(write("s.tsv", "u2\tg1\t0.25\nu1\tg2\n"),
                              SideRole::kUserSide, false, x, sink_);
  const auto& m = side.matrix();
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(1, 0), 0.25);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(0, 0), 0.0);
}

TEST_F(IoTest, WrongAxisAndTranspose) {
  const auto x = small_dataset();
  const auto p = write("s.tsv", "\tf1\ni1\t1\ni2\t0\ni3\t1\n");
  EXPECT_EQ(code_of([&] { load_side(p, SideRole::kItemSide, false, x, sink_); }),
            ErrorCode::kDimensionMismatch);
  const auto side = load_side(p, SideRole::kItemSide, true, x, sink_);
  EXPECT_EQ(side.matrix().rows(), 1u);
  EXPECT_EQ(side.matrix().cols(), 3u);
  EXPECT_EQ(side.matrix()(0, 2), 1.0);
}

TEST_F(IoTest, UnknownLabel) {
  const auto x = small_dataset();
  try {
    load_side(write("s.tsv", "\ti1\tzz\nf\t1\t1\n"), SideRole::kItemSide, false, x, sink_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLabel);
    EXPECT_NE(std::string(e.what()).find("'zz'"), std::string::npos);
  }
}

TEST_F(IoTest, ManifestAndDataset) {
  write("x.tsv", "u1\ti1\nu2\ti2\n");
  write("items.tsv", "\ti1\ti2\ni1\t1\t0.5\ni2\t0.5\t1\n");
  write("users.tsv", "u1\tu2\t0.3\n");
  const auto path = write("m.txt",
                          "format_version = 1\ninteractions = x.tsv\n"
                          "item_side.sim = items.tsv\nitem_side.sim.weight = 2\n"
                          "user_side.net = users.tsv\n");
  const auto m = load_manifest(path);
  EXPECT_EQ(m.interactions, dir_ / "x.tsv");
  ASSERT_EQ(m.item_sides.size(), 1u);
  EXPECT_EQ(m.item_sides[0].name, "sim");
  EXPECT_EQ(m.item_sides[0].weight, 2.0);
  ASSERT_EQ(m.user_sides.size(), 1u);
  const auto d = load_dataset(m, sink_);
  EXPECT_EQ(d.x.nnz(), 2u);
  EXPECT_EQ(d.item_sides.size(), 1u);
  ASSERT_EQ(d.user_sides[0].matrix().cols(), 1u);
  EXPECT_EQ(d.user_sides[0].matrix()(0, 0), 0.3);
}

TEST_F(IoTest, ManifestErrors) {
  EXPECT_EQ(code_of([&] { load_manifest(write("a.txt", "item_side.s = s.tsv\n")); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_manifest(write("b.txt", "interactions = x\nfoo = 1\n")); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_manifest(write("c.txt", "format_version = 9\n")); }),
            ErrorCode::kUnsupportedVersion);
}

WeightModel sample_model() {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n;
  DenseMatrix b(4, 4), u(3, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) b(i, j) = i == j ? 0.0 : n(gen);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) u(i, j) = i == j ? 0.0 : n(gen);
  Hyperparams hp;
  hp.lambda1 = 0.1;
  hp.lambda2 = 1.0 / 3.0;
  hp.tie_lambdas = false;
  hp.betas = {0.7};
  hp.gammas = {1e-300, 5};
  return WeightModel(b, u, hp, 0xdeadbeefcafef00dULL);
}

std::string serialized(const WeightModel& m) {
  std::ostringstream out(std::ios::binary);
  write_model(m, out);
  return out.str();
}

TEST_F(IoTest, ModelRoundTripIsBitExact) {
  const auto m = sample_model();
  save_model(m, dir_ / "m.duet");
  const auto back = load_model(dir_ / "m.duet");
  EXPECT_EQ(*back.item_weights(), *m.item_weights());
  EXPECT_EQ(*back.user_weights(), *m.user_weights());
  EXPECT_EQ(back.hyperparams(), m.hyperparams());
  EXPECT_EQ(back.fingerprint(), m.fingerprint());
  EXPECT_EQ(serialized(back), serialized(m));

  const WeightModel item_only(m.item_weights(), std::nullopt, m.hyperparams(), 1);
  std::istringstream in(serialized(item_only));
  const auto again = read_model(in);
  EXPECT_FALSE(again.user_weights().has_value());
}

TEST_F(IoTest, ModelCorruption) {
  const std::string bytes = serialized(sample_model());
  auto read = [](std::string s) {
    std::istringstream in(s);
    return read_model(in);
  };
  EXPECT_EQ(code_of([&] { read(bytes.substr(0, bytes.size() / 2)); }),
            ErrorCode::kCorruptModel);
  EXPECT_EQ(code_of([&] { read(bytes.substr(0, 6)); }), ErrorCode::kCorruptModel);
  std::string flipped = bytes;
  flipped[bytes.size() - 20] ^= 0x1;
  EXPECT_EQ(code_of([&] { read(flipped); }), ErrorCode::kCorruptModel);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(code_of([&] { read(magic); }), ErrorCode::kCorruptModel);
  std::string version = bytes;
  version[4] = 0;  // little-endian u32 version 1 -> 0
  EXPECT_EQ(code_of([&] { read(version); }), ErrorCode::kUnsupportedVersion);
}

TEST_F(IoTest, ParamsRoundTrip) {
  Hyperparams hp;
  hp.lambda1 = 0.1;
  hp.lambda2 = 0.1;
  hp.betas = {1.0 / 3.0, 0};
  hp.gammas = {2.5};
  {
    std::ofstream out(dir_ / "p.txt");
    write_params(out, hp, Method::kDuet);
  }
  const auto back = read_params(dir_ / "p.txt");
  EXPECT_EQ(back.hyperparams, hp);
  EXPECT_EQ(back.method, Method::kDuet);
}

TEST_F(IoTest, DenseTableRoundTrip) {
  const auto x = small_dataset();
  DenseMatrix m(2, 3, {0.1, 1.0 / 3.0, 0, 1, 2, 3});
  write_dense_table(dir_ / "t.tsv", {"f1", "f2"}, x.item_labels(), m);
  const auto side = load_side(dir_ / "t.tsv", SideRole::kItemSide, false, x, sink_);
  EXPECT_EQ(side.matrix(), m);
  write_interactions(dir_ / "x.tsv", x);
  const auto y = load_interactions(dir_ / "x.tsv", sink_);
  EXPECT_EQ(y.item_labels(), x.item_labels());
  EXPECT_EQ(y.user_labels(), x.user_labels());
  EXPECT_EQ(std::vector<Entry>(y.entries().begin(), y.entries().end()),
            std::vector<Entry>(x.entries().begin(), x.entries().end()));
}

}  // namespace
}  // namespace duet
