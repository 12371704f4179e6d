#include "blog/evalharness.hpp"

#include "blog/deltadesign.hpp"
#include "blog/error.hpp"
#include "blog/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blog {

namespace {

struct ReplicateSlot {
  std::optional<SelectionOutcome> outcome;
  std::vector<ThresholdPoint> curve;
  std::string error;
};

StudyResult assemble(std::string kind, Preset preset, const StudyOptions& options, std::size_t n_features,
                     std::vector<ReplicateSlot>& slots, bool with_curve) {
  StudyResult result;
  result.kind = std::move(kind);
  result.preset = std::string(to_string(preset));
  result.seed = options.seed;
  result.replicates = options.replicates;
  result.selection_counts.assign(n_features, 0);
  if (with_curve) {
    for (double t : options.thresholds) result.threshold_curve.push_back({t, 0.0, 0.0});
  }
  for (std::size_t r = 0; r < slots.size(); ++r) {
    auto& slot = slots[r];
    if (!slot.outcome) {
      result.failures.push_back({r, slot.error});
      continue;
    }
    const auto& o = *slot.outcome;
    result.replicate_index.push_back(r);
    for (auto j : o.selected) ++result.selection_counts[j];
    if (o.true_positives == o.n_targets) ++result.all_targets_selected;
    for (std::size_t k = 0; k < slot.curve.size() && with_curve; ++k) {
      result.threshold_curve[k].mean_fpr += slot.curve[k].mean_fpr;
      result.threshold_curve[k].mean_tpr += slot.curve[k].mean_tpr;
    }
    result.per_replicate.push_back(std::move(*slot.outcome));
  }
  const auto ok = static_cast<double>(result.per_replicate.size());
  if (ok > 0) {
    for (const auto& o : result.per_replicate) {
      result.mean_fpr += o.fpr;
      result.mean_tpr += o.tpr;
    }
    result.mean_fpr /= ok;
    result.mean_tpr /= ok;
    for (auto& point : result.threshold_curve) {
      point.mean_fpr /= ok;
      point.mean_tpr /= ok;
    }
  } else {
    result.mean_fpr = result.mean_tpr = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

void check_thresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) throw Error(ErrorCode::InvalidArgument, "threshold list is empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw Error(ErrorCode::InvalidArgument, "thresholds must be ascending");
}

}  // namespace

bool StudyResult::failed() const noexcept {
  return replicates == 0 || static_cast<double>(failures.size()) > 0.05 * static_cast<double>(replicates);
}

SelectionOutcome score_selection(std::vector<std::size_t> selected, const SimTruth& truth) {
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
  SelectionOutcome o;
  o.n_features = truth.n_features;
  o.n_targets = truth.target_indices.size();
  for (auto j : selected) {
    if (j >= truth.n_features) throw Error(ErrorCode::InvalidArgument, "selected feature out of range");
    if (truth.is_target(j)) {
      ++o.true_positives;
    } else {
      ++o.false_positives;
    }
  }
  const std::size_t noise = o.n_features - o.n_targets;
  o.fpr = noise > 0 ? static_cast<double>(o.false_positives) / static_cast<double>(noise) : 0.0;
  o.tpr = o.n_targets > 0 ? static_cast<double>(o.true_positives) / static_cast<double>(o.n_targets) : 0.0;
  o.selected = std::move(selected);
  return o;
}

std::vector<double> default_thresholds() { return {0.0, 2.0, 6.0, 10.0, decisive_two_log_bf()}; }

std::vector<ThresholdPoint> bf_threshold_sweep(std::span<const BayesFactorReport> reports, const SimTruth& truth,
                                               std::span<const double> thresholds) {
  check_thresholds(thresholds);
  std::vector<ThresholdPoint> curve;
  curve.reserve(thresholds.size());
  for (double cutoff : thresholds) {
    std::vector<std::size_t> selected;
    for (const auto& r : reports)
      if (r.two_log_bf > cutoff) selected.push_back(r.feature);
    const auto o = score_selection(std::move(selected), truth);
    curve.push_back({cutoff, o.fpr, o.tpr});
  }
  return curve;
}

StudyResult run_univariate_study(Preset preset_name, const GPriorSpec& spec, const StudyOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  check_thresholds(options.thresholds);
  std::vector<ReplicateSlot> slots(options.replicates);
  const SimScenario base = preset(preset_name, options.seed);

  // The feature screen inside each replicate runs serially; replicates are the unit of parallelism.
  parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    try {
      SimScenario scenario = base;
      scenario.replicate = r;
      scenario.jump = options.jump;
      const auto [data, truth] = simulate(scenario);
      const auto screen = univariate_screen(data, spec, 1);
      std::vector<std::size_t> decisive;
      for (const auto& rep : screen.reports)
        if (rep.decisive) decisive.push_back(rep.feature);
      slots[r].outcome = score_selection(std::move(decisive), truth);
      slots[r].curve = bf_threshold_sweep(screen.reports, truth, options.thresholds);
    } catch (const Error& e) {
      slots[r].error = e.what();
    }
  });
  return assemble("univariate", preset_name, options, base.n_features(), slots, true);
}

StudyResult run_multivariate_study(Preset preset_name, const GibbsConfig& config, const StudyOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  config.check();
  std::vector<ReplicateSlot> slots(options.replicates);
  const SimScenario base = preset(preset_name, options.seed);

  parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    try {
      SimScenario scenario = base;
      scenario.replicate = r;
      scenario.jump = options.jump;
      const auto [data, truth] = simulate(scenario);
      const auto design = build_multivariate_design(data);
      GibbsConfig cfg = config;
      cfg.seed = options.seed;
      cfg.replicate = r;
      cfg.keep_draws = false;
      const auto chain = run_gibbs(design, cfg);
      std::vector<std::size_t> selected;
      for (std::size_t g = 0; g < chain.selected.size(); ++g)
        if (chain.selected[g]) selected.push_back(chain.feature_index[g]);
      slots[r].outcome = score_selection(std::move(selected), truth);
    } catch (const Error& e) {
      slots[r].error = e.what();
    }
  });
  return assemble("multivariate", preset_name, options, base.n_features(), slots, false);
}

}  // namespace blog
