#include "blog/gprior.hpp"

#include "blog/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace blog {

namespace {

constexpr double kMaxGramCondition = 1e12;

void check_dims(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size())
    throw Error(ErrorCode::DimensionMismatch, "x has " + std::to_string(x.rows()) + " rows but y has " +
                                                  std::to_string(y.size()) + " entries");
  if (x.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "design has no columns");
}

struct LeastSquares {
  OlsFit fit;
  Eigen::MatrixXd xtx_inv;
};

LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  check_dims(x, y);
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (n <= k)
    throw Error(ErrorCode::UnderdeterminedSystem,
                std::to_string(n) + " rows for " + std::to_string(k) + " columns");

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(k - 1);
  if (!(smin > 0.0) || (smax / smin) * (smax / smin) > kMaxGramCondition)
    throw Error(ErrorCode::SingularDesign, "X'X condition number exceeds 1e12");

  LeastSquares ls;
  const Eigen::VectorXd inv_s = s.cwiseInverse();
  ls.fit.beta_hat = svd.matrixV() * (inv_s.asDiagonal() * (svd.matrixU().transpose() * y));
  ls.xtx_inv = svd.matrixV() * inv_s.cwiseAbs2().asDiagonal() * svd.matrixV().transpose();
  ls.xtx_inv = 0.5 * (ls.xtx_inv + ls.xtx_inv.transpose());
  ls.fit.fitted = x * ls.fit.beta_hat;
  ls.fit.rss = (y - ls.fit.fitted).squaredNorm();
  ls.fit.sigma2_hat = ls.fit.rss / static_cast<double>(n - k);
  const double yy = y.squaredNorm();
  ls.fit.r_squared = yy > 0.0 ? std::clamp(1.0 - ls.fit.rss / yy, 0.0, 1.0) : 0.0;
  return ls;
}

void check_prior(const GPriorSpec& spec) {
  if (!(spec.a >= 0.0) || !(spec.b >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "inverse-gamma parameters must be nonnegative");
}

double finish_rate(const GPriorSpec& spec, double quad) {
  const double b_star = spec.b + 0.5 * quad;
  if (!(b_star > 0.0))
    throw Error(ErrorCode::ZeroResidual, "posterior rate is zero; the improper prior gives no proper posterior");
  return b_star;
}

Eigen::VectorXd prior_mean_or_zero(const Eigen::VectorXd& beta0, Eigen::Index k) {
  GPriorSpec spec;
  spec.beta0 = beta0;
  return spec.prior_mean(k);
}

}  // namespace

Eigen::VectorXd GPriorSpec::prior_mean(Eigen::Index k) const {
  if (beta0.size() == 0) return Eigen::VectorXd::Zero(k);
  if (beta0.size() != k)
    throw Error(ErrorCode::DimensionMismatch, "beta0 has length " + std::to_string(beta0.size()) +
                                                  ", design has " + std::to_string(k) + " columns");
  return beta0;
}

OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) { return least_squares(x, y).fit; }

double NIGPosterior::log_density(const Eigen::VectorXd& beta, double sigma2) const {
  if (!(sigma2 > 0.0)) return -std::numeric_limits<double>::infinity();
  const auto k = static_cast<double>(beta_star.size());
  const Eigen::LLT<Eigen::MatrixXd> llt(v_star);
  const Eigen::VectorXd z = llt.matrixL().solve(beta - beta_star);
  const double log_det_v = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double log_normal = -0.5 * k * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * log_det_v -
                            0.5 * z.squaredNorm() / sigma2;
  const double log_ig = a_star * std::log(b_star) - std::lgamma(a_star) - (a_star + 1.0) * std::log(sigma2) -
                        b_star / sigma2;
  return log_normal + log_ig;
}

NIGPosterior nig_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                           const Eigen::MatrixXd& v0) {
  check_dims(x, y);
  check_prior(spec);
  const Eigen::Index k = x.cols();
  if (v0.rows() != k || v0.cols() != k) throw Error(ErrorCode::DimensionMismatch, "v0 must be k x k");
  const Eigen::VectorXd beta0 = spec.prior_mean(k);

  const Eigen::LLT<Eigen::MatrixXd> v0_llt(v0);
  if (v0_llt.info() != Eigen::Success) throw Error(ErrorCode::SingularCovariance, "v0 is not SPD");
  const Eigen::MatrixXd v0_inv = v0_llt.solve(Eigen::MatrixXd::Identity(k, k));

  const Eigen::MatrixXd precision = v0_inv + x.transpose() * x;
  const Eigen::LLT<Eigen::MatrixXd> prec_llt(precision);
  if (prec_llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularDesign, "V0^-1 + X'X is not positive definite");

  NIGPosterior post;
  post.beta_star = prec_llt.solve(v0_inv * beta0 + x.transpose() * y);
  post.v_star = prec_llt.solve(Eigen::MatrixXd::Identity(k, k));
  post.v_star = 0.5 * (post.v_star + post.v_star.transpose());
  post.a_star = spec.a + 0.5 * static_cast<double>(x.rows());
  const Eigen::VectorXd shift = post.beta_star - beta0;
  post.b_star = finish_rate(spec, (y - x * post.beta_star).squaredNorm() + shift.dot(v0_inv * shift));
  post.g_used = std::numeric_limits<double>::quiet_NaN();
  post.sigma2_hat = std::numeric_limits<double>::quiet_NaN();
  post.r_squared = std::numeric_limits<double>::quiet_NaN();
  if (x.rows() > k) {
    try {
      const auto ols = ols_fit(x, y);
      post.sigma2_hat = ols.sigma2_hat;
      post.r_squared = ols.r_squared;
    } catch (const Error&) {
      // A proper prior still gives a posterior when OLS is not identifiable.
    }
  }
  return post;
}

SureG sure_g(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta0) {
  const auto ls = least_squares(x, y);
  if (!(ls.fit.sigma2_hat > 0.0))
    throw Error(ErrorCode::ZeroResidual, "SURE g needs a nonzero residual variance");
  const Eigen::VectorXd prior_fit = x * prior_mean_or_zero(beta0, x.cols());
  SureG out;
  out.raw = (ls.fit.fitted - prior_fit).squaredNorm() /
                (static_cast<double>(x.cols()) * ls.fit.sigma2_hat) -
            1.0;
  out.floored = !(out.raw > 0.0);
  out.g = out.floored ? kSureFloor : out.raw;
  return out;
}

double sure_value(double g, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta0) {
  if (!(g > 0.0)) throw Error(ErrorCode::NonPositiveG, "g must be positive");
  const auto ls = least_squares(x, y);
  const Eigen::VectorXd prior_fit = x * prior_mean_or_zero(beta0, x.cols());
  const double w = g / (1.0 + g);
  const Eigen::VectorXd fitted = (1.0 - w) * prior_fit + w * ls.fit.fitted;
  const auto n = static_cast<double>(x.rows());
  const double trace = w * static_cast<double>(x.cols());
  return (y - fitted).squaredNorm() + (2.0 * trace - n) * ls.fit.sigma2_hat;
}

GResolution resolve_g(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                      std::optional<std::size_t> subjects) {
  switch (spec.g_rule) {
    case GRule::SqrtN:
      return {std::sqrt(static_cast<double>(subjects.value_or(static_cast<std::size_t>(x.rows())))), false};
    case GRule::Fixed:
      if (!(spec.fixed_g > 0.0) || !std::isfinite(spec.fixed_g))
        throw Error(ErrorCode::NonPositiveG, "fixed g must be a positive finite number");
      return {spec.fixed_g, false};
    case GRule::SureMin: {
      const auto s = sure_g(x, y, spec.prior_mean(x.cols()));
      return {s.g, s.floored};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown g rule");
}

NIGPosterior gprior_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                              std::optional<std::size_t> subjects) {
  check_prior(spec);
  const auto ls = least_squares(x, y);
  const Eigen::VectorXd beta0 = spec.prior_mean(x.cols());
  const auto resolved = resolve_g(x, y, spec, subjects);
  const double g = resolved.g;
  if (!(g > 0.0)) throw Error(ErrorCode::NonPositiveG, "resolved g is not positive");

  NIGPosterior post;
  post.g_used = g;
  post.g_floored = resolved.floored;
  post.beta_star = beta0 / (1.0 + g) + (g / (1.0 + g)) * ls.fit.beta_hat;
  post.v_star = (g / (1.0 + g)) * ls.xtx_inv;
  post.a_star = spec.a + 0.5 * static_cast<double>(x.rows());
  // V0^-1 = X'X / g
  const Eigen::VectorXd shift = x * (post.beta_star - beta0);
  post.b_star = finish_rate(spec, (y - x * post.beta_star).squaredNorm() + shift.squaredNorm() / g);
  post.sigma2_hat = ls.fit.sigma2_hat;
  post.r_squared = ls.fit.r_squared;
  return post;
}

}  // namespace blog
