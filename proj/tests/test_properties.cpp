#include "blog/bayesfactor.hpp"
#include "blog/bglss.hpp"
#include "blog/deltadesign.hpp"
#include "blog/evalharness.hpp"
#include "blog/gprior.hpp"
#include "blog/simgen.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace blog;

namespace {

constexpr int kTrials = 100;

std::map<std::string, double> bf_by_name(const ScreenResult& s) {
  std::map<std::string, double> out;
  for (const auto& r : s.reports) out[r.feature_name] = r.two_log_bf;
  return out;
}

}  // namespace

TEST(Property, GPriorMeanIsShrinkageCombination) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ug(0.01, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 8 + static_cast<Eigen::Index>(rng() % 20);
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % 5);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, k);
    const Eigen::VectorXd y = oracle::random_vector(rng, n);
    GPriorSpec spec = GPriorSpec::fixed(ug(rng));
    spec.beta0 = oracle::random_vector(rng, k);
    spec.a = 1.5;
    spec.b = 0.5;
    const auto post = gprior_posterior(x, y, spec);
    const auto ols = ols_fit(x, y);
    const double g = spec.fixed_g;
    const Eigen::VectorXd expected = (spec.beta0 + g * ols.beta_hat) / (1.0 + g);
    ASSERT_LE((post.beta_star - expected).norm(), 1e-8 * (1.0 + expected.norm())) << "trial " << t;
    EXPECT_DOUBLE_EQ(post.a_star, spec.a + 0.5 * static_cast<double>(n));
    EXPECT_GT(post.b_star, spec.b);
    const Eigen::MatrixXd v = g / (1.0 + g) * (x.transpose() * x).inverse();
    EXPECT_LE((post.v_star - v).norm(), 1e-8 * v.norm());
  }
}

TEST(Property, SureGIsNonNegativeAndFloored) {
  std::mt19937_64 rng(102);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 20);
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % 4);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, k);
    const Eigen::VectorXd y = oracle::random_vector(rng, n);
    const auto s = sure_g(x, y, Eigen::VectorXd::Zero(k));
    EXPECT_GE(s.g, kSureFloor);
    EXPECT_EQ(s.floored, s.raw <= kSureFloor);
    if (!s.floored) EXPECT_DOUBLE_EQ(s.g, s.raw);
  }
}

TEST(Property, NullBfInvariantToReparameterization) {
  std::mt19937_64 rng(103);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 12 + static_cast<Eigen::Index>(rng() % 30);
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % 6);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, k);
    const Eigen::VectorXd y = oracle::random_vector(rng, n);
    const Eigen::MatrixXd a = oracle::random_matrix(rng, k, k) + 3.0 * Eigen::MatrixXd::Identity(k, k);
    const double r1 = ols_fit(x, y).r_squared;
    const double r2 = ols_fit(x * a, 4.0 * y).r_squared;
    ASSERT_NEAR(r1, r2, 1e-9);
    const auto nn = static_cast<std::size_t>(n), kk = static_cast<std::size_t>(k);
    EXPECT_NEAR(null_based_bf(r1, 3.0, nn, kk), null_based_bf(r2, 3.0, nn, kk), 1e-7);
  }
}

TEST(Property, GbfInvariantToScaledRotation) {
  std::mt19937_64 rng(108);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 12 + static_cast<Eigen::Index>(rng() % 30);
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % 6);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, n, k);
    const Eigen::VectorXd y = oracle::random_vector(rng, n);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::random_matrix(rng, k, k)).householderQ();
    const double v = maruyama_george_gbf(x, y);
    EXPECT_NEAR(v, maruyama_george_gbf(2.5 * x * q, 4.0 * y), 1e-8 * (1.0 + std::abs(v)));
  }
}

TEST(Property, NullBfBoundedByFullFit) {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < kTrials; ++t) {
    const double r2 = u(rng), g = 0.1 + 50.0 * u(rng);
    const std::size_t n = 10 + rng() % 40, p = 1 + rng() % 6;
    const double v = null_based_bf(r2, g, n, p);
    EXPECT_LE(v, null_based_bf(1.0, g, n, p) + 1e-12);
    EXPECT_GE(v, null_based_bf(0.0, g, n, p) - 1e-12);
  }
}

TEST(Property, DesignShapesForAnyPanel) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SimScenario sc = preset(Preset::S30, seed);
    sc.n_times = 2 + seed % 5;
    sc.n_subjects = 3 + seed % 7;
    sc.n_targets = seed % 3;
    sc.n_noise = 1 + seed % 4;
    const auto [ds, truth] = simulate(sc);
    const auto d = build_multivariate_design(ds);
    EXPECT_EQ(static_cast<std::size_t>(d.x.rows()), sc.n_subjects * (sc.n_times - 1));
    EXPECT_EQ(static_cast<std::size_t>(d.x.cols()), sc.n_features() * lag_block_width(sc.n_times));
    EXPECT_EQ(d.y.size(), d.x.rows());
    for (std::size_t j = 0; j < d.n_groups(); ++j) EXPECT_EQ(d.group_offset(j), j * lag_block_width(sc.n_times));
  }
}

TEST(Property, ScreenInvariantToFeatureLevelShift) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [ds, truth] = simulate(preset(Preset::S30, seed));
    std::vector<Eigen::MatrixXd> shifted;
    for (std::size_t j = 0; j < ds.n_features(); ++j)
      shifted.push_back(ds.feature(j).array() + 64.0 * static_cast<double>(j % 3));
    const LongitudinalDataset moved(ds.responses().array() + 128.0, shifted, ds.feature_names(), ds.subject_ids());
    const auto a = bf_by_name(univariate_screen(ds, GPriorSpec::sqrt_n(), 1));
    const auto b = bf_by_name(univariate_screen(moved, GPriorSpec::sqrt_n(), 1));
    for (const auto& [name, v] : a) EXPECT_NEAR(v, b.at(name), 1e-8 * (1.0 + std::abs(v)));
  }
}

TEST(Property, ScreenInvariantToSubjectAndFeatureOrder) {
  std::mt19937_64 rng(105);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [ds, truth] = simulate(preset(Preset::S30, seed));
    std::vector<Eigen::Index> rows(ds.n_subjects());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<Eigen::Index>(i);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::vector<std::size_t> cols(ds.n_features());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    std::shuffle(cols.begin(), cols.end(), rng);
    auto permute = [&](const Eigen::MatrixXd& m) {
      Eigen::MatrixXd out(m.rows(), m.cols());
      for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
      return out;
    };
    std::vector<Eigen::MatrixXd> features;
    std::vector<std::string> names, ids;
    for (auto j : cols) {
      features.push_back(permute(ds.feature(j)));
      names.push_back(ds.feature_names()[j]);
    }
    for (auto i : rows) ids.push_back(ds.subject_ids()[static_cast<std::size_t>(i)]);
    const LongitudinalDataset shuffled(permute(ds.responses()), features, names, ids);
    const auto a = bf_by_name(univariate_screen(ds, GPriorSpec::sure_min(), 1));
    const auto b = bf_by_name(univariate_screen(shuffled, GPriorSpec::sure_min(), 1));
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [name, v] : a) EXPECT_NEAR(v, b.at(name), 1e-8 * (1.0 + std::abs(v)));
  }
}

TEST(Property, ZeroPreferringMedianIsOddAndBounded) {
  std::mt19937_64 rng(106);
  std::normal_distribution<double> n01;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<double> v(1 + rng() % 30);
    for (auto& x : v) x = (rng() % 3 == 0) ? 0.0 : n01(rng);
    std::vector<double> neg(v.size());
    std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
    const double m = zero_preferring_median(v);
    EXPECT_EQ(zero_preferring_median(neg), m == 0.0 ? 0.0 : -m);
    EXPECT_GE(m, *std::min_element(v.begin(), v.end()));
    EXPECT_LE(m, *std::max_element(v.begin(), v.end()));
  }
}

TEST(Property, SupersetSelectionNeverLowersRates) {
  std::mt19937_64 rng(107);
  for (int t = 0; t < kTrials; ++t) {
    SimTruth truth;
    truth.n_features = 2 + rng() % 30;
    const std::size_t k = 1 + rng() % (truth.n_features - 1);
    for (std::size_t j = 0; j < k; ++j) truth.target_indices.push_back(j);
    std::vector<std::size_t> small, big;
    for (std::size_t j = 0; j < truth.n_features; ++j) {
      const auto r = rng() % 3;
      if (r == 0) small.push_back(j);
      if (r <= 1) big.push_back(j);
    }
    const auto a = score_selection(small, truth), b = score_selection(big, truth);
    EXPECT_LE(a.fpr, b.fpr);
    EXPECT_LE(a.tpr, b.tpr);
    EXPECT_GE(a.fpr, 0.0);
    EXPECT_LE(b.tpr, 1.0);
  }
}
