#pragma once

#include "blog/bglss.hpp"
#include "blog/deltadesign.hpp"
#include "blog/gprior.hpp"
#include "blog/random.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace blog::oracle {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n01(rng);
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::MatrixXd a = random_matrix(rng, n, n);
  return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

// Unnormalized log of likelihood x NIG prior, written out term by term.
struct NigTarget {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd beta0;
  Eigen::MatrixXd v0;
  double a = 0.0;
  double b = 0.0;

  double log_unnormalized(const Eigen::VectorXd& beta, double sigma2) const {
    const double n = static_cast<double>(y.size());
    const double k = static_cast<double>(beta.size());
    const double rss = (y - x * beta).squaredNorm();
    const Eigen::VectorXd d = beta - beta0;
    const double quad = d.dot(v0.ldlt().solve(d));
    return -0.5 * n * std::log(sigma2) - 0.5 * rss / sigma2 - 0.5 * k * std::log(sigma2) - 0.5 * quad / sigma2 -
           (a + 1.0) * std::log(sigma2) - b / sigma2;
  }
};

// Log normalizing constant of a two-coefficient NigTarget by composite
// 20-point Gauss-Legendre in (beta1, beta2, log sigma2). The box is centred
// on `center` with half-widths `half`.
inline double log_normalizer_2d(const NigTarget& t, const Eigen::Vector3d& center, const Eigen::Vector3d& half,
                                int panels, double log_shift) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  // Full symmetric node/weight list on [-1, 1].
  std::vector<double> nodes, weights;
  const auto& ab = Rule::abscissa();
  const auto& wt = Rule::weights();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    nodes.push_back(ab[i]);
    weights.push_back(wt[i]);
    if (ab[i] != 0.0) {
      nodes.push_back(-ab[i]);
      weights.push_back(wt[i]);
    }
  }
  auto axis = [&](int d) {
    std::vector<std::pair<double, double>> pts;
    const double lo = center(d) - half(d);
    const double h = 2.0 * half(d) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (std::size_t i = 0; i < nodes.size(); ++i) pts.emplace_back(mid + 0.5 * h * nodes[i], 0.5 * h * weights[i]);
    }
    return pts;
  };
  const auto b1 = axis(0), b2 = axis(1), ls = axis(2);
  long double total = 0.0L;
  Eigen::VectorXd beta(2);
  for (const auto& [s, ws] : ls) {
    const double sigma2 = std::exp(s);
    for (const auto& [u, wu] : b1) {
      beta(0) = u;
      for (const auto& [v, wv] : b2) {
        beta(1) = v;
        // Jacobian of sigma2 = exp(s) is sigma2.
        total += static_cast<long double>(ws * wu * wv *
                                          std::exp(t.log_unnormalized(beta, sigma2) + s - log_shift));
      }
    }
  }
  return static_cast<double>(std::log(total)) + log_shift;
}

// SURE risk evaluated from scratch at g: fit, residual, degrees of freedom.
inline double sure_by_hand(double g, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta0) {
  const Eigen::VectorXd bhat = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  const double n = static_cast<double>(x.rows());
  const double k = static_cast<double>(x.cols());
  const double s2 = (y - x * bhat).squaredNorm() / (n - k);
  const Eigen::VectorXd shrunk = beta0 / (1.0 + g) + g / (1.0 + g) * bhat;
  return (y - x * shrunk).squaredNorm() + (2.0 * g * k / (1.0 + g) - n) * s2;
}

struct GewekeResult {
  std::size_t repetitions = 0;
  std::size_t sigma2_covered = 0;
  double coverage() const { return static_cast<double>(sigma2_covered) / static_cast<double>(repetitions); }
};

// Prior-predictive check on a two-group toy: draw (pi0, tau2, beta, sigma2)
// from the prior with lambda fixed and a proper IG(shape, rate) on sigma2,
// draw y, run the sampler with the same prior, and count how often the
// central 95% interval of sigma2 covers the drawn value.
inline GewekeResult geweke_sigma2(std::size_t repetitions, std::uint64_t seed, double shape = 3.0, double rate = 2.0,
                                  std::size_t n_iter = 3000, std::size_t burn_in = 1000) {
  const Eigen::Index n = 12;
  const std::size_t m = 2;
  const double lambda = 1.0;
  GewekeResult out;
  out.repetitions = repetitions;
  for (std::size_t r = 0; r < repetitions; ++r) {
    Rng rng = make_rng(seed, r, 99);
    DifferencedDesign d;
    d.x.resize(n, 2 * static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < d.x.cols(); ++j)
      for (Eigen::Index i = 0; i < n; ++i) d.x(i, j) = draw_normal(rng);
    d.block_sizes = {m, m};
    d.feature_index = {0, 1};

    const double pi0 = draw_beta(rng, 1.0, 1.0);
    const double sigma2 = draw_inverse_gamma(rng, shape, rate);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.x.cols());
    for (std::size_t g = 0; g < 2; ++g) {
      const double tau2 = draw_gamma(rng, 0.5 * (static_cast<double>(m) + 1.0), 0.5 * lambda * lambda);
      if (draw_uniform(rng) < pi0) continue;
      for (std::size_t c = 0; c < m; ++c)
        beta(static_cast<Eigen::Index>(g * m + c)) = std::sqrt(sigma2 * tau2) * draw_normal(rng);
    }
    d.y = d.x * beta;
    for (Eigen::Index i = 0; i < n; ++i) d.y(i) += std::sqrt(sigma2) * draw_normal(rng);

    GibbsConfig cfg;
    cfg.n_iter = n_iter;
    cfg.burn_in = burn_in;
    cfg.seed = seed;
    cfg.replicate = r;
    cfg.lambda_init = lambda;
    cfg.mcem_rounds = 0;
    cfg.standardize = false;
    cfg.sigma2_prior_shape = shape;
    cfg.sigma2_prior_rate = rate;
    const auto summary = run_gibbs(d, cfg);
    if (summary.sigma2_summary.lower <= sigma2 && sigma2 <= summary.sigma2_summary.upper) ++out.sigma2_covered;
  }
  return out;
}

}  // namespace blog::oracle
