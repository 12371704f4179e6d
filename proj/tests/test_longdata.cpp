#include "blog/error.hpp"
#include "blog/longdata.hpp"
#include "blog/simgen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace blog;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("blog_longdata_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// n x T panel with p features filled from a seeded generator.
LongitudinalDataset random_panel(std::size_t n, std::size_t t, std::size_t p, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  auto fill = [&] {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 10.0 * n01(rng);
    return m;
  };
  std::vector<Eigen::MatrixXd> features;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) {
    features.push_back(fill());
    names.push_back("f" + std::to_string(j));
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(100 + i));
  return LongitudinalDataset(fill(), std::move(features), std::move(names), std::move(ids));
}

}  // namespace

TEST(LongData, LoadsPanelWithManyFeatures) {
  TempDir dir;
  const auto ds = random_panel(15, 4, 352, 1);
  write_long_csv(dir.file("d.csv"), ds);
  const auto back = load_long_csv(dir.file("d.csv"));
  EXPECT_EQ(back.n_subjects(), 15u);
  EXPECT_EQ(back.n_times(), 4u);
  EXPECT_EQ(back.n_features(), 352u);
}

TEST(LongData, MinimalPanel) {
  TempDir dir;
  write_file(dir.file("d.csv"), "subject,time,response,x\nA,1,1.5,2\nA,2,2.5,3\nA,3,3.5,5\nA,4,4.5,8\n");
  const auto ds = load_long_csv(dir.file("d.csv"));
  EXPECT_EQ(ds.n_subjects(), 1u);
  EXPECT_EQ(ds.n_times(), 4u);
  EXPECT_EQ(ds.n_features(), 1u);
  EXPECT_DOUBLE_EQ(ds.feature(0)(0, 3), 8.0);
  EXPECT_DOUBLE_EQ(ds.responses()(0, 2), 3.5);
}

TEST(LongData, RaggedPanelRejected) {
  TempDir dir;
  std::ostringstream csv;
  csv << "subject,time,response,x\n";
  for (const char* s : {"S1", "S2", "S3"})
    for (int t = 1; t <= 4; ++t) {
      if (std::string(s) == "S3" && t == 4) continue;
      csv << s << ',' << t << ",1," << t << '\n';
    }
  write_file(dir.file("d.csv"), csv.str());
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("d.csv")); }), ErrorCode::RaggedPanel);
}

TEST(LongData, InputErrors) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("missing.csv")); }), ErrorCode::FileNotFound);

  write_file(dir.file("a.csv"), "subject,time,response,x\nA,1,1,\nA,2,2,3\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("a.csv")); }), ErrorCode::MissingCell);

  write_file(dir.file("b.csv"), "subject,time,response,x\nA,1,1,abc\nA,2,2,3\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("b.csv")); }), ErrorCode::MissingCell);

  write_file(dir.file("c.csv"), "subject,time,response,x\nA,1,1,1\nA,1,2,3\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("c.csv")); }), ErrorCode::DuplicateKey);

  write_file(dir.file("d.csv"), "id,time,response,x\nA,1,1,1\nA,2,2,3\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("d.csv")); }), ErrorCode::MissingColumn);

  write_file(dir.file("e.csv"), "subject,time,response\nA,1,1\nA,2,2\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("e.csv")); }), ErrorCode::MissingColumn);

  write_file(dir.file("f.csv"), "subject,time,response,x\nA,1,1,1,9\n");
  EXPECT_EQ(code_of([&] { load_long_csv(dir.file("f.csv")); }), ErrorCode::MissingCell);
}

TEST(LongData, CustomColumnsAndDelimiter) {
  TempDir dir;
  write_file(dir.file("d.tsv"), "pid\tvisit\tscore\tm1\tm2\n\"P 1\"\t0\t1\t2\t3\n\"P 1\"\t5\t4\t5\t6\n");
  ColumnConfig cfg;
  cfg.subject = "pid";
  cfg.time = "visit";
  cfg.response = "score";
  cfg.delimiter = '\t';
  const auto ds = load_long_csv(dir.file("d.tsv"), cfg);
  EXPECT_EQ(ds.subject_ids(), std::vector<std::string>{"P 1"});
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"m1", "m2"}));
  EXPECT_DOUBLE_EQ(ds.feature(1)(0, 1), 6.0);
}

TEST(LongData, RoundTripIsBitExact) {
  TempDir dir;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto ds = random_panel(7, 3 + seed % 3, 4, seed);
    // Subjects are reloaded in lexicographic order; ids here already sort that way.
    write_long_csv(dir.file("r.csv"), ds);
    EXPECT_TRUE(load_long_csv(dir.file("r.csv")) == ds) << "seed " << seed;
  }
}

TEST(LongData, RowOrderDoesNotMatter) {
  TempDir dir;
  const auto ds = random_panel(6, 4, 3, 9);
  write_long_csv(dir.file("a.csv"), ds);
  std::ifstream in(dir.file("a.csv"));
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  std::mt19937 rng(3);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::ofstream out(dir.file("b.csv"));
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
  out.close();
  EXPECT_TRUE(load_long_csv(dir.file("b.csv")) == ds);
}

TEST(LongData, ConstructorChecks) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Ones(2, 3);
  EXPECT_EQ(code_of([&] { LongitudinalDataset(y, {Eigen::MatrixXd::Ones(2, 2)}, {"a"}, {"1", "2"}); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { LongitudinalDataset(y, {y, y}, {"a", "a"}, {"1", "2"}); }), ErrorCode::DuplicateKey);
  EXPECT_EQ(code_of([&] { LongitudinalDataset(y, {y}, {"a"}, {"1"}); }), ErrorCode::DimensionMismatch);
  Eigen::MatrixXd bad = y;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { LongitudinalDataset(y, {bad}, {"a"}, {"1", "2"}); }), ErrorCode::MissingCell);
}

TEST(LongData, SelectFeatures) {
  const auto ds = random_panel(3, 3, 4, 2);
  const auto sub = ds.select_features({3, 1});
  ASSERT_EQ(sub.n_features(), 2u);
  EXPECT_EQ(sub.feature_names()[0], "f3");
  EXPECT_TRUE(sub.feature(1) == ds.feature(1));
}

TEST(Validate, ConstantFeatureFlagged) {
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(4, 3);
  const Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(4, 3, 7.0);
  const LongitudinalDataset ds(y, {y, constant}, {"v", "c"}, {"1", "2", "3", "4"});
  const auto report = validate(ds);
  EXPECT_EQ(report.constant_features, std::vector<std::size_t>{1});
  EXPECT_FALSE(report.clean());
}

TEST(Validate, ConstantForOneSubjectOnly) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Random(4, 3);
  f.row(2).setConstant(3.0);
  const LongitudinalDataset ds(f, {f}, {"x"}, {"1", "2", "3", "4"});
  EXPECT_TRUE(validate(ds).clean());
}

TEST(Validate, NearConstantFeature) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(4, 3, 2.0);
  f(0, 1) += 1e-7;
  const LongitudinalDataset ds(f, {f}, {"x"}, {"1", "2", "3", "4"});
  const auto report = validate(ds);
  EXPECT_TRUE(report.constant_features.empty());
  EXPECT_EQ(report.near_constant_features, std::vector<std::size_t>{0});
  EXPECT_TRUE(validate(ds, 0.0).clean());
}

TEST(Validate, SimulatedPanelsAreClean) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [ds, truth] = simulate(preset(Preset::S100, seed));
    EXPECT_TRUE(validate(ds).clean()) << "seed " << seed;
  }
}
