#pragma once

#include "blog/longdata.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

namespace blog {

// How the target mean jump between the first two time points is chosen.
enum class JumpMode {
  Uniform,  // one U(5, 10) draw per target per replicate
  Ramp,     // evenly spaced from 5 to 10 across the targets
};

struct SimScenario {
  std::size_t n_targets = 20;
  std::size_t n_noise = 80;
  std::size_t n_subjects = 15;
  std::size_t n_times = 4;
  double beta_target = 1.0 / 3.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  JumpMode jump = JumpMode::Uniform;

  std::size_t n_features() const noexcept { return n_targets + n_noise; }
};

struct SimTruth {
  std::vector<std::size_t> target_indices;  // the first n_targets features
  Eigen::VectorXd beta;
  std::size_t n_features = 0;

  bool is_target(std::size_t feature) const noexcept { return feature < target_indices.size(); }
};

enum class Preset { S30, S100, S350 };

Preset parse_preset(std::string_view name);
std::string_view to_string(Preset preset) noexcept;

// S30 = 10 targets / 20 noise, S100 = 20 / 80, S350 = 50 / 300; 15 subjects, 4 times.
SimScenario preset(Preset name, std::uint64_t seed);

// Draws one panel. Feature trajectories start at N(mu_j, sd_j) with
// mu_j ~ U(10, 20) and sd_j ~ U(1, 2); targets jump by a mean shift between
// times 1 and 2; every other step is a N(0, sd_j) random-walk increment. The
// response starts at N(15, 5) and each increment adds beta' times the sum of
// all feature increments so far plus N(0, 5) noise. Second parameters are
// standard deviations.
std::pair<LongitudinalDataset, SimTruth> simulate(const SimScenario& scenario);

// Writes `data.csv` (longitudinal layout) and `truth.csv` (feature,is_target) into dir.
void export_simulation(const std::filesystem::path& dir, const LongitudinalDataset& dataset,
                       const SimTruth& truth);

}  // namespace blog
