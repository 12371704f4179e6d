#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace blog {

// A balanced longitudinal panel: n subjects observed at T time points, each
// observation carrying a scalar response and p feature abundances.
//
// Immutable after construction. The constructor checks every dimension and
// rejects non-finite values and duplicate feature names.
class LongitudinalDataset {
 public:
  // `features[j]` is the n_subjects x n_times matrix of feature j.
  LongitudinalDataset(Eigen::MatrixXd responses, std::vector<Eigen::MatrixXd> features,
                      std::vector<std::string> feature_names, std::vector<std::string> subject_ids);

  std::size_t n_subjects() const noexcept { return static_cast<std::size_t>(responses_.rows()); }
  std::size_t n_times() const noexcept { return static_cast<std::size_t>(responses_.cols()); }
  std::size_t n_features() const noexcept { return features_.size(); }

  const Eigen::MatrixXd& responses() const noexcept { return responses_; }
  const Eigen::MatrixXd& feature(std::size_t j) const { return features_.at(j); }
  const std::vector<Eigen::MatrixXd>& features() const noexcept { return features_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& subject_ids() const noexcept { return subject_ids_; }

  // Copy restricted to the given feature columns, in the given order.
  LongitudinalDataset select_features(const std::vector<std::size_t>& columns) const;

  // Exact (bitwise for finite values) equality of every field.
  friend bool operator==(const LongitudinalDataset& a, const LongitudinalDataset& b);

 private:
  Eigen::MatrixXd responses_;
  std::vector<Eigen::MatrixXd> features_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> subject_ids_;
};

struct ColumnConfig {
  std::string subject = "subject";
  std::string time = "time";
  std::string response = "response";
  char delimiter = ',';
};

// Reads the wide-per-time layout: one row per (subject, time), one column per
// feature. Every column not named in `config` is a feature. Subjects are
// ordered lexicographically by id and rows within a subject by numeric time,
// so the result does not depend on input row order. Time values only order
// observations; spacing is ignored.
LongitudinalDataset load_long_csv(const std::filesystem::path& path,
                                  const ColumnConfig& config = {});

// Writes `dataset` in the layout read by load_long_csv. Times are written as
// 1..T. Values use 17 significant digits so a reload is bit-exact.
void write_long_csv(const std::filesystem::path& path, const LongitudinalDataset& dataset,
                    const ColumnConfig& config = {});

struct ValidationReport {
  // Features whose first differences are exactly zero for every subject.
  std::vector<std::size_t> constant_features;
  // Features that vary, but whose mean squared first difference is below the floor.
  std::vector<std::size_t> near_constant_features;

  bool clean() const noexcept { return constant_features.empty() && near_constant_features.empty(); }
};

ValidationReport validate(const LongitudinalDataset& dataset, double variance_floor = 1e-10);

}  // namespace blog
