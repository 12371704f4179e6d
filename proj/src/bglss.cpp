#include "blog/bglss.hpp"

#include "blog/error.hpp"
#include "blog/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace blog {

namespace {

// Draws of one group, stored sparsely: spike draws are only counted.
struct GroupTrace {
  std::size_t zeros = 0;
  std::vector<double> slab;  // m values per slab draw, draw-major

  std::size_t slab_draws(std::size_t m) const { return slab.size() / m; }
};

double median_with_zeros(std::vector<double> nonzero, std::size_t zeros) {
  const std::size_t total = nonzero.size() + zeros;
  if (total == 0) throw Error(ErrorCode::EmptyChain, "median of an empty sample");
  std::sort(nonzero.begin(), nonzero.end());
  const auto negatives = static_cast<std::size_t>(
      std::lower_bound(nonzero.begin(), nonzero.end(), 0.0) - nonzero.begin());
  auto order_stat = [&](std::size_t i) {
    if (i < negatives) return nonzero[i];
    if (i < negatives + zeros) return 0.0;
    return nonzero[i - zeros];
  };
  if (total % 2 == 1) return order_stat(total / 2);
  const double lo = order_stat(total / 2 - 1);
  const double hi = order_stat(total / 2);
  if (lo == 0.0 || hi == 0.0) return 0.0;
  return 0.5 * (lo + hi);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double lambda_from_mean_sum(std::size_t p, std::size_t groups, double sum_means) {
  if (!(sum_means > 0.0) || !std::isfinite(sum_means))
    throw Error(ErrorCode::InvalidArgument, "tau^2 means must be positive and finite");
  return std::sqrt(static_cast<double>(p + groups) / sum_means);
}

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

class Sampler {
 public:
  Sampler(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<std::size_t> sizes,
          const GibbsConfig& config)
      : x_(x), y_(y), sizes_(std::move(sizes)), config_(config),
        rng_(make_rng(config.seed, config.replicate, kGibbsStream)) {
    const std::size_t groups = sizes_.size();
    offsets_.resize(groups);
    std::size_t off = 0;
    for (std::size_t g = 0; g < groups; ++g) {
      offsets_[g] = static_cast<Eigen::Index>(off);
      off += sizes_[g];
      const auto m = static_cast<Eigen::Index>(sizes_[g]);
      const auto block = x_.middleCols(offsets_[g], m);
      gram_.push_back(block.transpose() * block);
    }
    total_coefs_ = off;
    beta_ = Eigen::VectorXd::Zero(x_.cols());
    tau2_.assign(groups, 1.0);
    nonzero_.assign(groups, false);
    sigma2_ = std::max(y_.squaredNorm() / static_cast<double>(y_.size()), 1e-8);
    pi0_ = 0.5;
    lambda_ = config.lambda_init;
    residual_ = y_;
  }

  double lambda() const { return lambda_; }
  void set_lambda(double lambda) { lambda_ = lambda; }
  std::size_t total_coefs() const { return total_coefs_; }
  std::size_t groups() const { return sizes_.size(); }

  const Eigen::VectorXd& beta() const { return beta_; }
  const std::vector<double>& tau2() const { return tau2_; }
  const std::vector<bool>& nonzero() const { return nonzero_; }
  double sigma2() const { return sigma2_; }
  double pi0() const { return pi0_; }

  void sweep(std::size_t iteration) {
    if (iteration % 50 == 0) residual_.noalias() = y_ - x_ * beta_;
    for (std::size_t g = 0; g < groups(); ++g) update_group(g);
    for (std::size_t g = 0; g < groups(); ++g) update_tau2(g);
    update_sigma2();
    update_pi0();
  }

 private:
  void update_group(std::size_t g) {
    const auto m = static_cast<Eigen::Index>(sizes_[g]);
    const auto block = x_.middleCols(offsets_[g], m);
    auto beta_g = beta_.segment(offsets_[g], m);
    if (nonzero_[g]) residual_.noalias() += block * beta_g;

    const Eigen::VectorXd proj = block.transpose() * residual_;
    Eigen::MatrixXd precision = gram_[g];
    precision.diagonal().array() += 1.0 / tau2_[g];
    const Eigen::LLT<Eigen::MatrixXd> llt(precision);
    const Eigen::VectorXd mean = llt.solve(proj);
    const double log_det_precision = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    // log |I + tau2 G| = m log tau2 + log |G + I / tau2|
    const double log_det = static_cast<double>(m) * std::log(tau2_[g]) + log_det_precision;
    const double log_odds_slab = std::log1p(-pi0_) - std::log(pi0_) - 0.5 * log_det +
                                 0.5 * proj.dot(mean) / sigma2_;
    if (draw_uniform(rng_) < logistic(log_odds_slab)) {
      Eigen::VectorXd z(m);
      for (Eigen::Index i = 0; i < m; ++i) z(i) = draw_normal(rng_);
      beta_g = mean + std::sqrt(sigma2_) * llt.matrixU().solve(z);
      nonzero_[g] = true;
      residual_.noalias() -= block * beta_g;
    } else {
      beta_g.setZero();
      nonzero_[g] = false;
    }
  }

  void update_tau2(std::size_t g) {
    const auto m = static_cast<double>(sizes_[g]);
    double draw = 0.0;
    if (nonzero_[g]) {
      const double norm = beta_.segment(offsets_[g], static_cast<Eigen::Index>(sizes_[g])).norm();
      const double inv = draw_inverse_gaussian(rng_, lambda_ * std::sqrt(sigma2_) / norm, lambda_ * lambda_);
      draw = 1.0 / inv;
    } else {
      draw = draw_gamma(rng_, 0.5 * (m + 1.0), 0.5 * lambda_ * lambda_);
    }
    // Keep tau2 inside the representable positive range.
    tau2_[g] = std::clamp(draw, 1e-300, 1e300);
  }

  void update_sigma2() {
    double shape = config_.sigma2_prior_shape + 0.5 * static_cast<double>(y_.size());
    double rate = config_.sigma2_prior_rate + 0.5 * residual_.squaredNorm();
    for (std::size_t g = 0; g < groups(); ++g) {
      if (!nonzero_[g]) continue;
      shape += 0.5 * static_cast<double>(sizes_[g]);
      rate += 0.5 * beta_.segment(offsets_[g], static_cast<Eigen::Index>(sizes_[g])).squaredNorm() / tau2_[g];
    }
    const double draw = draw_inverse_gamma(rng_, shape, rate);
    if (!std::isfinite(draw) || !(draw > 0.0))
      throw Error(ErrorCode::NonConvergentSigma, "sigma^2 draw is " + std::to_string(draw));
    sigma2_ = draw;
  }

  void update_pi0() {
    const auto active = static_cast<double>(std::count(nonzero_.begin(), nonzero_.end(), true));
    const double zeros = static_cast<double>(groups()) - active;
    const double draw = draw_beta(rng_, config_.pi0_beta_a + zeros, config_.pi0_beta_b + active);
    pi0_ = std::clamp(draw, std::numeric_limits<double>::min(), 1.0 - std::numeric_limits<double>::epsilon());
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  std::vector<std::size_t> sizes_;
  GibbsConfig config_;
  Rng rng_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::MatrixXd> gram_;
  std::size_t total_coefs_ = 0;
  Eigen::VectorXd beta_;
  std::vector<double> tau2_;
  std::vector<bool> nonzero_;
  double sigma2_ = 1.0;
  double pi0_ = 0.5;
  double lambda_ = 1.0;
  Eigen::VectorXd residual_;
};

}  // namespace

void GibbsConfig::check() const {
  if (n_iter == 0 || burn_in >= n_iter)
    throw Error(ErrorCode::InvalidArgument, "need 0 <= burn_in < n_iter");
  if (!(pi0_beta_a > 0.0) || !(pi0_beta_b > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pi0 Beta prior parameters must be positive");
  if (!(lambda_init > 0.0) || !std::isfinite(lambda_init))
    throw Error(ErrorCode::InvalidArgument, "lambda_init must be positive");
  if (mcem_rounds > 0 && mcem_inner_iters == 0)
    throw Error(ErrorCode::InvalidArgument, "mcem_inner_iters must be positive");
  if (!(sigma2_prior_shape >= 0.0) || !(sigma2_prior_rate >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma^2 prior parameters must be nonnegative");
}

double mcem_lambda_update(const std::vector<std::vector<double>>& tau2_samples, std::size_t p) {
  if (tau2_samples.empty()) throw Error(ErrorCode::EmptyChain, "no groups");
  double sum_means = 0.0;
  for (const auto& s : tau2_samples) {
    if (s.empty()) throw Error(ErrorCode::EmptyChain, "a group has no tau^2 draws");
    sum_means += std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  }
  return lambda_from_mean_sum(p, tau2_samples.size(), sum_means);
}

double zero_preferring_median(std::vector<double> values) {
  const auto zero_end = std::remove(values.begin(), values.end(), 0.0);
  const auto zeros = static_cast<std::size_t>(values.end() - zero_end);
  values.erase(zero_end, values.end());
  return median_with_zeros(std::move(values), zeros);
}

MedianSelection posterior_median_select(const Eigen::MatrixXd& draws, std::span<const std::size_t> block_sizes) {
  if (draws.rows() == 0) throw Error(ErrorCode::EmptyChain, "no draws");
  const std::size_t total = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
  if (total != static_cast<std::size_t>(draws.cols()))
    throw Error(ErrorCode::DimensionMismatch, "block sizes do not cover the draw columns");
  MedianSelection out;
  Eigen::Index col = 0;
  for (auto m : block_sizes) {
    Eigen::VectorXd med(static_cast<Eigen::Index>(m));
    for (Eigen::Index c = 0; c < med.size(); ++c, ++col) {
      const Eigen::VectorXd column = draws.col(col);
      med(c) = zero_preferring_median(std::vector<double>(column.data(), column.data() + column.size()));
    }
    out.selected.push_back((med.array() != 0.0).any());
    out.group_medians.push_back(std::move(med));
  }
  return out;
}

ChainSummary run_gibbs(const DifferencedDesign& design, const GibbsConfig& config) {
  config.check();
  if (design.block_sizes.empty()) throw Error(ErrorCode::DimensionMismatch, "design has no groups");
  if (design.x.rows() != design.y.size())
    throw Error(ErrorCode::DimensionMismatch, "x rows differ from y length");
  const std::size_t cols = std::accumulate(design.block_sizes.begin(), design.block_sizes.end(), std::size_t{0});
  if (cols != static_cast<std::size_t>(design.x.cols()))
    throw Error(ErrorCode::DimensionMismatch, "block sizes do not sum to the column count");
  for (auto m : design.block_sizes)
    if (m == 0) throw Error(ErrorCode::DimensionMismatch, "empty group");

  // Unit root-mean-square per column (norm sqrt(rows)), not centred; all-zero columns keep scale 1.
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(design.x.cols());
  Eigen::MatrixXd x = design.x;
  if (config.standardize) {
    const double target = std::sqrt(static_cast<double>(x.rows()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double norm = x.col(j).norm();
      if (norm > 0.0) {
        scale(j) = norm / target;
        x.col(j) /= scale(j);
      }
    }
  }

  Sampler sampler(x, design.y, design.block_sizes, config);
  const std::size_t groups = design.block_sizes.size();

  ChainSummary summary;
  summary.feature_index = design.feature_index;
  if (summary.feature_index.size() != groups) {
    summary.feature_index.resize(groups);
    std::iota(summary.feature_index.begin(), summary.feature_index.end(), std::size_t{0});
  }

  std::size_t iteration = 0;
  for (std::size_t round = 0; round < config.mcem_rounds; ++round) {
    std::vector<double> tau2_sum(groups, 0.0);
    for (std::size_t it = 0; it < config.mcem_inner_iters; ++it, ++iteration) {
      sampler.sweep(iteration);
      for (std::size_t g = 0; g < groups; ++g) tau2_sum[g] += sampler.tau2()[g];
    }
    double sum_means = 0.0;
    for (double s : tau2_sum) sum_means += s / static_cast<double>(config.mcem_inner_iters);
    const double lambda = lambda_from_mean_sum(sampler.total_coefs(), groups, sum_means);
    sampler.set_lambda(lambda);
    summary.lambda_trace.push_back(lambda);
  }
  if (summary.lambda_trace.empty()) summary.lambda_trace.push_back(sampler.lambda());
  summary.lambda_final = sampler.lambda();

  const std::size_t kept = config.n_iter - config.burn_in;
  std::vector<GroupTrace> traces(groups);
  std::vector<double> sigma2_draws;
  sigma2_draws.reserve(kept);
  double pi0_sum = 0.0;
  if (config.keep_draws) {
    summary.draws = ChainDraws{Eigen::MatrixXd(kept, design.x.cols()), Eigen::MatrixXd(kept, groups),
                               Eigen::VectorXd(kept), Eigen::VectorXd(kept)};
  }

  std::vector<Eigen::Index> offsets(groups);
  for (std::size_t g = 1; g < groups; ++g)
    offsets[g] = offsets[g - 1] + static_cast<Eigen::Index>(design.block_sizes[g - 1]);

  for (std::size_t it = 0; it < config.n_iter; ++it, ++iteration) {
    sampler.sweep(iteration);
    if (it < config.burn_in) continue;
    const std::size_t row = it - config.burn_in;
    const Eigen::VectorXd beta = sampler.beta().cwiseQuotient(scale);
    for (std::size_t g = 0; g < groups; ++g) {
      if (sampler.nonzero()[g]) {
        const auto seg = beta.segment(offsets[g], static_cast<Eigen::Index>(design.block_sizes[g]));
        traces[g].slab.insert(traces[g].slab.end(), seg.data(), seg.data() + seg.size());
      } else {
        ++traces[g].zeros;
      }
    }
    sigma2_draws.push_back(sampler.sigma2());
    pi0_sum += sampler.pi0();
    if (summary.draws) {
      auto& d = *summary.draws;
      d.beta.row(static_cast<Eigen::Index>(row)) = beta.transpose();
      for (std::size_t g = 0; g < groups; ++g)
        d.tau2(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(g)) = sampler.tau2()[g];
      d.sigma2(static_cast<Eigen::Index>(row)) = sampler.sigma2();
      d.pi0(static_cast<Eigen::Index>(row)) = sampler.pi0();
    }
  }

  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t m = design.block_sizes[g];
    const auto& trace = traces[g];
    const std::size_t slab = trace.slab_draws(m);
    Eigen::VectorXd med(static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<double> values;
      values.reserve(slab);
      for (std::size_t k = 0; k < slab; ++k)
        if (const double v = trace.slab[k * m + c]; v != 0.0) values.push_back(v);
      const std::size_t zeros = trace.zeros + (slab - values.size());
      med(static_cast<Eigen::Index>(c)) = median_with_zeros(std::move(values), zeros);
    }
    summary.inclusion_prop.push_back(static_cast<double>(slab) / static_cast<double>(kept));
    summary.selected.push_back((med.array() != 0.0).any());
    summary.group_medians.push_back(std::move(med));
  }

  const double sigma2_sum = std::accumulate(sigma2_draws.begin(), sigma2_draws.end(), 0.0);
  summary.sigma2_summary.mean = sigma2_sum / static_cast<double>(kept);
  summary.sigma2_summary.lower = quantile(sigma2_draws, 0.025);
  summary.sigma2_summary.upper = quantile(sigma2_draws, 0.975);
  summary.pi0_mean = pi0_sum / static_cast<double>(kept);
  return summary;
}

}  // namespace blog
