#pragma once

#include "blog/longdata.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace blog {

// First-differenced regression problem for one or more features.
//
// Rows are ordered time-major: row (k * n + i) holds subject i's change from
// time k to k+1. Each feature contributes a block of T(T-1)/2 columns; within
// a block, block-row k (k = 0..T-2) regresses on that feature's differences
// at times 0..k, laid out as a lower-triangular arrangement of diagonal
// blocks. Column offset of diagonal block k is k(k+1)/2.
struct DifferencedDesign {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<std::size_t> block_sizes;
  std::vector<std::size_t> feature_index;

  std::size_t n_groups() const noexcept { return block_sizes.size(); }
  // Column offset of group g in x.
  std::size_t group_offset(std::size_t g) const;
};

// T(T-1)/2, the coefficient count of one feature block.
constexpr std::size_t lag_block_width(std::size_t n_times) noexcept { return n_times * (n_times - 1) / 2; }

Eigen::VectorXd difference_response(const LongitudinalDataset& dataset);

DifferencedDesign build_univariate_design(const LongitudinalDataset& dataset, std::size_t feature);

// [X^(1) | X^(2) | ... | X^(p)]
DifferencedDesign build_multivariate_design(const LongitudinalDataset& dataset);

// (T-1) x T matrix with rows e_{t+1} - e_t.
Eigen::MatrixXd differencing_matrix(std::size_t n_times);

struct GlsComparison {
  Eigen::VectorXd slope_level;
  Eigen::VectorXd slope_diff;
  double max_abs_gap = 0.0;
};

// Slope GLS estimate in the level model y = 1*b0 + X*b1 + e, Cov(e) = sigma,
// against the GLS estimate in the differenced model Dy = DX*b1 + De.
// The two agree exactly for any SPD sigma; the gap measures round-off.
GlsComparison gls_equivalence_check(const Eigen::MatrixXd& x_level, const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& y);

}  // namespace blog
