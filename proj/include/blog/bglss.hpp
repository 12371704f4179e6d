#pragma once

#include "blog/deltadesign.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace blog {

struct GibbsConfig {
  std::size_t n_iter = 10000;
  std::size_t burn_in = 5000;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;  // second key of the generator stream
  double pi0_beta_a = 1.0;
  double pi0_beta_b = 1.0;
  double lambda_init = 1.0;
  std::size_t mcem_rounds = 5;
  std::size_t mcem_inner_iters = 1000;
  bool standardize = true;  // rescale columns to unit root-mean-square; medians are reported unscaled
  // Inverse-gamma prior on sigma^2; (0, 0) is the improper 1/sigma^2 prior.
  double sigma2_prior_shape = 0.0;
  double sigma2_prior_rate = 0.0;
  bool keep_draws = false;

  void check() const;
};

// Post-burn-in draws, coefficients on the original column scale.
struct ChainDraws {
  Eigen::MatrixXd beta;   // draws x coefficients
  Eigen::MatrixXd tau2;   // draws x groups
  Eigen::VectorXd sigma2;
  Eigen::VectorXd pi0;
};

struct Sigma2Summary {
  double mean = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};

struct ChainSummary {
  std::vector<std::size_t> feature_index;   // per group
  std::vector<Eigen::VectorXd> group_medians;
  std::vector<double> inclusion_prop;
  std::vector<bool> selected;
  std::vector<double> lambda_trace;  // lambda after each MC-EM round
  double lambda_final = 0.0;
  Sigma2Summary sigma2_summary;
  double pi0_mean = 0.0;
  std::optional<ChainDraws> draws;
};

// Spike-and-slab Bayesian group lasso, block Gibbs sampler:
//   y ~ N(X beta, sigma^2 I)
//   beta_g ~ (1 - pi0) N(0, sigma^2 tau2_g I) + pi0 delta_0
//   tau2_g ~ Gamma((m_g + 1) / 2, rate lambda^2 / 2)
//   pi0 ~ Beta(a, b), sigma^2 ~ IG(shape, rate) or 1/sigma^2
// lambda is set by Monte Carlo EM over `mcem_rounds` warm-up rounds, then
// held fixed for the n_iter-sweep main chain.
ChainSummary run_gibbs(const DifferencedDesign& design, const GibbsConfig& config);

// lambda = sqrt((p + G) / sum_g mean(tau2_g draws)), G = tau2_samples.size().
double mcem_lambda_update(const std::vector<std::vector<double>>& tau2_samples, std::size_t p);

struct MedianSelection {
  std::vector<Eigen::VectorXd> group_medians;
  std::vector<bool> selected;
};

// Componentwise posterior medians per group from a draws x coefficients
// matrix. Zero is returned whenever it is a sample median of the component
// (always the case when at least half the draws are zero), so groups drawn
// from the spike at least half the time have exactly-zero medians.
MedianSelection posterior_median_select(const Eigen::MatrixXd& draws, std::span<const std::size_t> block_sizes);

// Sample median with the zero-preference rule above.
double zero_preferring_median(std::vector<double> values);

}  // namespace blog
