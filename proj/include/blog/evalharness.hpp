#pragma once

#include "blog/bayesfactor.hpp"
#include "blog/bglss.hpp"
#include "blog/gprior.hpp"
#include "blog/simgen.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blog {

struct SelectionOutcome {
  std::vector<std::size_t> selected;  // sorted feature indices
  std::size_t n_features = 0;
  std::size_t n_targets = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  double fpr = 0.0;  // false_positives / noise count (0 when there is no noise)
  double tpr = 0.0;  // true_positives / target count (0 when there are no targets)
};

SelectionOutcome score_selection(std::vector<std::size_t> selected, const SimTruth& truth);

struct ThresholdPoint {
  double two_log_bf = 0.0;
  double mean_fpr = 0.0;
  double mean_tpr = 0.0;
};

struct ReplicateFailure {
  std::size_t replicate = 0;
  std::string message;
};

struct StudyResult {
  std::string kind;  // "univariate" or "multivariate"
  std::string preset;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::vector<std::size_t> replicate_index;  // parallel to per_replicate
  std::vector<SelectionOutcome> per_replicate;
  std::vector<ReplicateFailure> failures;
  double mean_fpr = 0.0;
  double mean_tpr = 0.0;
  std::vector<ThresholdPoint> threshold_curve;
  // How many replicates selected each feature.
  std::vector<std::size_t> selection_counts;
  // Replicates in which every target was selected.
  std::size_t all_targets_selected = 0;

  // More than 5% of replicates failed.
  bool failed() const noexcept;
};

// {0, 2, 6, 10, 2 ln 150}
std::vector<double> default_thresholds();

// Features with two_log_bf > cutoff are selected at that cutoff. Skipped
// features are never selected. Thresholds must be nonempty and ascending.
std::vector<ThresholdPoint> bf_threshold_sweep(std::span<const BayesFactorReport> reports, const SimTruth& truth,
                                               std::span<const double> thresholds);

struct StudyOptions {
  std::size_t replicates = 25;
  std::uint64_t seed = 0;
  JumpMode jump = JumpMode::Uniform;
  std::size_t threads = 0;
  std::vector<double> thresholds = default_thresholds();
};

// Per replicate: simulate, screen every feature, score the decisive set
// (BF > 150) and the threshold sweep.
StudyResult run_univariate_study(Preset preset, const GPriorSpec& spec, const StudyOptions& options);

// Per replicate: simulate, build the concatenated design, run the sampler,
// score groups with nonzero posterior medians.
StudyResult run_multivariate_study(Preset preset, const GibbsConfig& config, const StudyOptions& options);

}  // namespace blog
