#pragma once

#include "blog/gprior.hpp"
#include "blog/longdata.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace blog {

// Kass-Raftery grades on the 2 ln(BF) scale.
enum class Evidence { BareMention, Positive, Strong, VeryStrong };

std::string_view to_string(Evidence e) noexcept;

inline constexpr double kDecisiveBayesFactor = 150.0;

// 2 ln(150): features above it are "decisive".
double decisive_two_log_bf() noexcept;

struct Classification {
  Evidence evidence = Evidence::BareMention;
  bool decisive = false;  // BF > 150
};

Classification classify_bf(double two_log_bf) noexcept;

// ln BF[M_gamma : M_null] for a g-prior regression with p_gamma predictors on
// n observations and (uncentered) coefficient of determination r_squared.
double null_based_bf(double r_squared, double g, std::size_t n, std::size_t p_gamma);

// Auxiliary fully-Bayes g-prior Bayes factor (log scale) of Maruyama and
// George, usable when columns outnumber rows. y is rescaled to unit norm first.
double maruyama_george_gbf(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct BayesFactorReport {
  std::size_t feature = 0;
  std::string feature_name;
  double log_bf = 0.0;
  double two_log_bf = 0.0;
  Evidence evidence = Evidence::BareMention;
  bool decisive = false;
  double g_used = 0.0;
  bool g_floored = false;
  double r_squared = 0.0;
  std::size_t rank = 0;  // 1 = strongest
};

struct SkippedFeature {
  std::size_t feature = 0;
  std::string feature_name;
  std::string reason;
};

struct ScreenResult {
  std::vector<BayesFactorReport> reports;  // sorted by rank
  std::vector<SkippedFeature> skipped;     // by feature index
};

// One g-prior regression per feature on its differenced design. The
// likelihood sample size is n(T-1); p_gamma is T(T-1)/2; the SqrtN rule uses
// the subject count. Features whose design is singular are skipped.
// `threads` == 0 uses the default pool size.
ScreenResult univariate_screen(const LongitudinalDataset& dataset, const GPriorSpec& spec,
                               std::size_t threads = 0);

struct GbfReport {
  std::size_t feature = 0;
  std::string feature_name;
  double log_gbf = 0.0;
};

// Per-feature auxiliary screen with the Maruyama-George factor.
std::vector<GbfReport> gbf_screen(const LongitudinalDataset& dataset, std::size_t threads = 0);

}  // namespace blog
