#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace blog {

enum class GRule { SqrtN, SureMin, Fixed };

struct GPriorSpec {
  GRule g_rule = GRule::SqrtN;
  double fixed_g = 1.0;   // used when g_rule == Fixed; must be > 0
  Eigen::VectorXd beta0;  // empty means the zero vector
  double a = 0.0;         // inverse-gamma shape (0: improper limit)
  double b = 0.0;         // inverse-gamma rate

  static GPriorSpec sqrt_n() { return {}; }
  static GPriorSpec sure_min() {
    GPriorSpec s;
    s.g_rule = GRule::SureMin;
    return s;
  }
  static GPriorSpec fixed(double g) {
    GPriorSpec s;
    s.g_rule = GRule::Fixed;
    s.fixed_g = g;
    return s;
  }

  // beta0, or zeros of length k when unset. Throws on a length mismatch.
  Eigen::VectorXd prior_mean(Eigen::Index k) const;
};

struct OlsFit {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd fitted;
  double rss = 0.0;
  double sigma2_hat = 0.0;  // rss / (n - k)
  double r_squared = 0.0;   // uncentered: 1 - rss / |y|^2
};

// Least squares through a singular value decomposition of X. Rejects designs
// with rows <= columns and designs whose X'X condition number exceeds 1e12.
OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Normal-inverse-gamma posterior of (beta, sigma^2):
//   beta | sigma^2, y ~ N(beta_star, sigma^2 v_star),  sigma^2 | y ~ IG(a_star, b_star).
struct NIGPosterior {
  Eigen::VectorXd beta_star;
  Eigen::MatrixXd v_star;
  double a_star = 0.0;
  double b_star = 0.0;
  double g_used = 0.0;          // NaN for a general (non g-prior) V0
  bool g_floored = false;       // SURE returned a non-positive g and it was floored
  double sigma2_hat = 0.0;      // NaN when OLS is not identifiable
  double r_squared = 0.0;       // NaN when OLS is not identifiable

  // Joint log density at (beta, sigma2).
  double log_density(const Eigen::VectorXd& beta, double sigma2) const;
};

// General conjugate update with prior beta | sigma^2 ~ N(beta0, sigma^2 v0).
NIGPosterior nig_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                           const Eigen::MatrixXd& v0);

struct GResolution {
  double g = 0.0;
  bool floored = false;
};

inline constexpr double kSureFloor = 1e-6;

// g from the rule in `spec`. SqrtN uses `subjects` when given (the panel's
// subject count), otherwise the row count of x.
GResolution resolve_g(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                      std::optional<std::size_t> subjects = std::nullopt);

// Zellner g-prior posterior, V0 = g (X'X)^-1.
NIGPosterior gprior_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPriorSpec& spec,
                              std::optional<std::size_t> subjects = std::nullopt);

struct SureG {
  double g = 0.0;      // after flooring
  double raw = 0.0;    // |Yhat_ols - X beta0|^2 / (k sigma2_hat) - 1
  bool floored = false;
};

// Closed-form minimizer of the SURE risk over g; floored at kSureFloor.
SureG sure_g(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta0);

// Unbiased risk estimate |y - X beta*(g)|^2 + (2 tr S - n) sigma2_hat with tr S = g k / (1 + g).
double sure_value(double g, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta0);

}  // namespace blog
