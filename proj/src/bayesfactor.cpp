#include "blog/bayesfactor.hpp"

#include "blog/deltadesign.hpp"
#include "blog/error.hpp"
#include "blog/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace blog {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

std::string_view to_string(Evidence e) noexcept {
  switch (e) {
    case Evidence::BareMention: return "BareMention";
    case Evidence::Positive: return "Positive";
    case Evidence::Strong: return "Strong";
    case Evidence::VeryStrong: return "VeryStrong";
  }
  return "Unknown";
}

double decisive_two_log_bf() noexcept { return 2.0 * std::log(kDecisiveBayesFactor); }

Classification classify_bf(double two_log_bf) noexcept {
  Classification c;
  if (two_log_bf >= 10.0) {
    c.evidence = Evidence::VeryStrong;
  } else if (two_log_bf >= 6.0) {
    c.evidence = Evidence::Strong;
  } else if (two_log_bf >= 2.0) {
    c.evidence = Evidence::Positive;
  }
  c.decisive = two_log_bf > decisive_two_log_bf();
  return c;
}

double null_based_bf(double r_squared, double g, std::size_t n, std::size_t p_gamma) {
  if (!(r_squared >= 0.0 && r_squared <= 1.0))
    throw Error(ErrorCode::InvalidR2, "R^2 = " + std::to_string(r_squared) + " is outside [0, 1]");
  if (!(g > 0.0)) throw Error(ErrorCode::NonPositiveG, "g must be positive");
  if (n <= p_gamma + 1)
    throw Error(ErrorCode::DegenerateDf,
                "n = " + std::to_string(n) + " must exceed p_gamma + 1 = " + std::to_string(p_gamma + 1));
  const auto nn = static_cast<double>(n);
  const auto pp = static_cast<double>(p_gamma);
  return 0.5 * (nn - pp - 1.0) * std::log1p(g) - 0.5 * (nn - 1.0) * std::log1p(g * (1.0 - r_squared));
}

double maruyama_george_gbf(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x rows differ from y length");
  if (x.size() == 0 || x.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::ZeroDesign, "design is zero");
  const double y_norm = y.norm();
  if (!(y_norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "response is identically zero");
  const Eigen::VectorXd yu = y / y_norm;

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& d = svd.singularValues();
  const double tol = d(0) * static_cast<double>(std::max(x.rows(), x.cols())) *
                     std::numeric_limits<double>::epsilon();
  Eigen::Index r = 0;
  while (r < d.size() && d(r) > tol) ++r;
  const double log_dbar = d.head(r).array().log().sum() / static_cast<double>(r);

  // Moore-Penrose least squares; equals ordinary least squares at full column rank.
  const Eigen::VectorXd coeffs = svd.matrixU().leftCols(r).transpose() * yu;
  const Eigen::VectorXd beta = svd.matrixV().leftCols(r) * (coeffs.array() / d.head(r).array()).matrix();
  const double beta_norm = beta.norm();

  const auto n = static_cast<double>(x.rows());
  const auto q = static_cast<double>(x.cols());
  if (q >= n - 1.0) return (1.0 - n) * (log_dbar + std::log(beta_norm));

  if (r < x.cols()) throw Error(ErrorCode::SingularDesign, "design is rank deficient");
  const double d_min = d(r - 1);
  const double r2 = std::clamp((x * beta).squaredNorm(), 0.0, 1.0);
  const double shape = 0.5 * (n - q) - 0.75;
  if (!(shape > 0.0)) throw Error(ErrorCode::DegenerateBeta, "Beta function argument (n-q)/2 - 3/4 <= 0");
  const double log_c = log_beta(0.25, shape) - log_beta(0.5 * q + 0.25, shape);
  return (log_dbar - std::log(d_min)) -
         (0.25 + 0.5 * q) * std::log(1.0 - r2 + d_min * d_min * beta_norm * beta_norm) - log_c -
         shape * std::log(1.0 - r2);
}

ScreenResult univariate_screen(const LongitudinalDataset& dataset, const GPriorSpec& spec, std::size_t threads) {
  const std::size_t p = dataset.n_features();
  const std::size_t n_obs = dataset.n_subjects() * (dataset.n_times() - 1);
  const std::size_t p_gamma = lag_block_width(dataset.n_times());

  std::vector<std::optional<BayesFactorReport>> slots(p);
  std::vector<std::string> skip_reason(p);
  // Hard input errors (bad dimensions, bad spec) propagate; per-feature
  // numerical failures become skips.
  parallel_for(p, threads, [&](std::size_t j) {
    const auto design = build_univariate_design(dataset, j);
    try {
      const auto fit = ols_fit(design.x, design.y);
      const auto g = resolve_g(design.x, design.y, spec, dataset.n_subjects());
      BayesFactorReport rep;
      rep.feature = j;
      rep.feature_name = dataset.feature_names()[j];
      rep.g_used = g.g;
      rep.g_floored = g.floored;
      rep.r_squared = fit.r_squared;
      rep.log_bf = null_based_bf(fit.r_squared, g.g, n_obs, p_gamma);
      rep.two_log_bf = 2.0 * rep.log_bf;
      const auto cls = classify_bf(rep.two_log_bf);
      rep.evidence = cls.evidence;
      rep.decisive = cls.decisive;
      slots[j] = std::move(rep);
    } catch (const Error& e) {
      if (!is_numerical(e.code())) throw;
      skip_reason[j] = e.what();
    }
  });

  ScreenResult result;
  for (std::size_t j = 0; j < p; ++j) {
    if (slots[j]) {
      result.reports.push_back(std::move(*slots[j]));
    } else {
      result.skipped.push_back({j, dataset.feature_names()[j], "SkippedSingular: " + skip_reason[j]});
    }
  }
  std::stable_sort(result.reports.begin(), result.reports.end(),
                   [](const BayesFactorReport& a, const BayesFactorReport& b) {
                     if (a.two_log_bf != b.two_log_bf) return a.two_log_bf > b.two_log_bf;
                     return a.feature < b.feature;
                   });
  for (std::size_t r = 0; r < result.reports.size(); ++r) result.reports[r].rank = r + 1;
  return result;
}

std::vector<GbfReport> gbf_screen(const LongitudinalDataset& dataset, std::size_t threads) {
  std::vector<GbfReport> out(dataset.n_features());
  parallel_for(out.size(), threads, [&](std::size_t j) {
    const auto design = build_univariate_design(dataset, j);
    out[j].feature = j;
    out[j].feature_name = dataset.feature_names()[j];
    try {
      out[j].log_gbf = maruyama_george_gbf(design.x, design.y);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroDesign && !is_numerical(e.code())) throw;
      out[j].log_gbf = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

}  // namespace blog
