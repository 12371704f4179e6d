#include "blog/deltadesign.hpp"

#include "blog/error.hpp"

#include <numeric>
#include <string>

namespace blog {

namespace {

void require_two_times(const LongitudinalDataset& dataset) {
  if (dataset.n_times() < 2)
    throw Error(ErrorCode::TooFewTimePoints,
                "first differences need T >= 2, got T = " + std::to_string(dataset.n_times()));
}

// n x (T-1) matrix of consecutive differences.
Eigen::MatrixXd row_differences(const Eigen::MatrixXd& m) {
  const Eigen::Index t = m.cols();
  return m.rightCols(t - 1) - m.leftCols(t - 1);
}

// Writes one feature's lag block into `x` starting at column `col0`.
void fill_block(Eigen::Ref<Eigen::MatrixXd> x, Eigen::Index col0, const Eigen::MatrixXd& delta) {
  const Eigen::Index n = delta.rows();
  const Eigen::Index steps = delta.cols();
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Eigen::Index offset = col0 + k * (k + 1) / 2;
    x.block(k * n, offset, n, k + 1) = delta.leftCols(k + 1);
  }
}

}  // namespace

std::size_t DifferencedDesign::group_offset(std::size_t g) const {
  if (g >= block_sizes.size()) throw Error(ErrorCode::InvalidArgument, "group index out of range");
  return std::accumulate(block_sizes.begin(), block_sizes.begin() + static_cast<std::ptrdiff_t>(g),
                         std::size_t{0});
}

Eigen::VectorXd difference_response(const LongitudinalDataset& dataset) {
  require_two_times(dataset);
  const Eigen::MatrixXd delta = row_differences(dataset.responses());
  // Column-major storage of the n x (T-1) matrix is exactly the time-major stacking.
  return Eigen::Map<const Eigen::VectorXd>(delta.data(), delta.size());
}

DifferencedDesign build_univariate_design(const LongitudinalDataset& dataset, std::size_t feature) {
  require_two_times(dataset);
  if (feature >= dataset.n_features())
    throw Error(ErrorCode::InvalidArgument, "feature index " + std::to_string(feature) + " out of range");
  const auto n = static_cast<Eigen::Index>(dataset.n_subjects());
  const auto width = lag_block_width(dataset.n_times());
  const auto steps = static_cast<Eigen::Index>(dataset.n_times() - 1);

  DifferencedDesign design;
  design.y = difference_response(dataset);
  design.x = Eigen::MatrixXd::Zero(n * steps, static_cast<Eigen::Index>(width));
  fill_block(design.x, 0, row_differences(dataset.feature(feature)));
  design.block_sizes = {width};
  design.feature_index = {feature};
  return design;
}

DifferencedDesign build_multivariate_design(const LongitudinalDataset& dataset) {
  require_two_times(dataset);
  const auto n = static_cast<Eigen::Index>(dataset.n_subjects());
  const auto width = lag_block_width(dataset.n_times());
  const auto steps = static_cast<Eigen::Index>(dataset.n_times() - 1);
  const std::size_t p = dataset.n_features();

  DifferencedDesign design;
  design.y = difference_response(dataset);
  design.x = Eigen::MatrixXd::Zero(n * steps, static_cast<Eigen::Index>(width * p));
  design.block_sizes.assign(p, width);
  design.feature_index.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    fill_block(design.x, static_cast<Eigen::Index>(j * width), row_differences(dataset.feature(j)));
    design.feature_index[j] = j;
  }
  return design;
}

Eigen::MatrixXd differencing_matrix(std::size_t n_times) {
  if (n_times < 2) throw Error(ErrorCode::TooFewTimePoints, "differencing matrix needs T >= 2");
  const auto t = static_cast<Eigen::Index>(n_times);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(t - 1, t);
  for (Eigen::Index r = 0; r < t - 1; ++r) {
    d(r, r) = -1.0;
    d(r, r + 1) = 1.0;
  }
  return d;
}

GlsComparison gls_equivalence_check(const Eigen::MatrixXd& x_level, const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& y) {
  const Eigen::Index t = x_level.rows();
  const Eigen::Index k = x_level.cols();
  if (sigma.rows() != t || sigma.cols() != t || y.size() != t)
    throw Error(ErrorCode::DimensionMismatch, "sigma must be T x T and y length T");
  if (t < 2) throw Error(ErrorCode::TooFewTimePoints, "level model needs T >= 2");
  if (!sigma.isApprox(sigma.transpose(), 1e-12))
    throw Error(ErrorCode::SingularCovariance, "sigma is not symmetric");

  const Eigen::LLT<Eigen::MatrixXd> sigma_llt(sigma);
  if (sigma_llt.info() != Eigen::Success) throw Error(ErrorCode::SingularCovariance, "sigma is not SPD");

  Eigen::MatrixXd augmented(t, k + 1);
  augmented << Eigen::VectorXd::Ones(t), x_level;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_qr(augmented);
  if (rank_qr.rank() != k + 1)
    throw Error(ErrorCode::RankDeficientDesign, "rank([1 : X]) < k + 1");

  // Level model: Omega = S^-1 - S^-1 1 (1' S^-1 1)^-1 1' S^-1.
  const Eigen::MatrixXd sigma_inv = sigma_llt.solve(Eigen::MatrixXd::Identity(t, t));
  const Eigen::VectorXd s_one = sigma_inv * Eigen::VectorXd::Ones(t);
  const Eigen::MatrixXd omega = sigma_inv - s_one * s_one.transpose() / s_one.sum();

  // Difference model: Psi = D' (D S D')^-1 D.
  const Eigen::MatrixXd d = differencing_matrix(static_cast<std::size_t>(t));
  const Eigen::LLT<Eigen::MatrixXd> dsd_llt(d * sigma * d.transpose());
  if (dsd_llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularCovariance, "D sigma D' is not SPD");
  const Eigen::MatrixXd psi = d.transpose() * dsd_llt.solve(d);

  auto gls_slope = [&](const Eigen::MatrixXd& w) -> Eigen::VectorXd {
    const Eigen::MatrixXd gram = x_level.transpose() * w * x_level;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
      throw Error(ErrorCode::RankDeficientDesign, "weighted Gram matrix is singular");
    return ldlt.solve(x_level.transpose() * w * y);
  };

  GlsComparison out;
  out.slope_level = gls_slope(omega);
  out.slope_diff = gls_slope(psi);
  out.max_abs_gap = (out.slope_level - out.slope_diff).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace blog
