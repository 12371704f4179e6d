#include "blog/simgen.hpp"

#include "blog/error.hpp"
#include "blog/random.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace blog {

Preset parse_preset(std::string_view name) {
  if (name == "s30" || name == "S30") return Preset::S30;
  if (name == "s100" || name == "S100") return Preset::S100;
  if (name == "s350" || name == "S350") return Preset::S350;
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(Preset preset) noexcept {
  switch (preset) {
    case Preset::S30: return "s30";
    case Preset::S100: return "s100";
    case Preset::S350: return "s350";
  }
  return "unknown";
}

SimScenario preset(Preset name, std::uint64_t seed) {
  SimScenario s;
  s.seed = seed;
  switch (name) {
    case Preset::S30: s.n_targets = 10; s.n_noise = 20; break;
    case Preset::S100: s.n_targets = 20; s.n_noise = 80; break;
    case Preset::S350: s.n_targets = 50; s.n_noise = 300; break;
  }
  return s;
}

std::pair<LongitudinalDataset, SimTruth> simulate(const SimScenario& scenario) {
  const std::size_t p = scenario.n_features();
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "scenario has no features");
  if (scenario.n_subjects == 0 || scenario.n_times < 2)
    throw Error(ErrorCode::InvalidArgument, "scenario needs subjects and at least two time points");
  Rng rng = make_rng(scenario.seed, scenario.replicate, kSimulationStream);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * draw_uniform(rng); };

  const auto n = static_cast<Eigen::Index>(scenario.n_subjects);
  const auto t_count = static_cast<Eigen::Index>(scenario.n_times);

  Eigen::VectorXd mu(static_cast<Eigen::Index>(p));
  Eigen::VectorXd sd(static_cast<Eigen::Index>(p));
  Eigen::VectorXd jump = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    mu(jj) = uniform(10.0, 20.0);
    sd(jj) = uniform(1.0, 2.0);
  }
  for (std::size_t j = 0; j < scenario.n_targets; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    if (scenario.jump == JumpMode::Uniform) {
      jump(jj) = uniform(5.0, 10.0);
    } else {
      jump(jj) = scenario.n_targets == 1
                     ? 5.0
                     : 5.0 + 5.0 * static_cast<double>(j) / static_cast<double>(scenario.n_targets - 1);
    }
  }

  SimTruth truth;
  truth.n_features = p;
  truth.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < scenario.n_targets; ++j) {
    truth.target_indices.push_back(j);
    truth.beta(static_cast<Eigen::Index>(j)) = scenario.beta_target;
  }

  std::vector<Eigen::MatrixXd> features(p, Eigen::MatrixXd(n, t_count));
  Eigen::MatrixXd responses(n, t_count);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      auto& f = features[j];
      f(i, 0) = mu(jj) + sd(jj) * draw_normal(rng);
      for (Eigen::Index t = 1; t < t_count; ++t) {
        const double shift = t == 1 ? jump(jj) : 0.0;
        f(i, t) = f(i, t - 1) + shift + sd(jj) * draw_normal(rng);
      }
    }
    responses(i, 0) = 15.0 + 5.0 * draw_normal(rng);
    // Each response increment carries the signal of every feature increment so far.
    double accumulated = 0.0;
    for (Eigen::Index t = 1; t < t_count; ++t) {
      for (std::size_t j = 0; j < scenario.n_targets; ++j)
        accumulated += truth.beta(static_cast<Eigen::Index>(j)) * (features[j](i, t) - features[j](i, t - 1));
      responses(i, t) = responses(i, t - 1) + accumulated + 5.0 * draw_normal(rng);
    }
  }

  std::vector<std::string> names(p);
  for (std::size_t j = 0; j < p; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "m%03zu", j + 1);
    names[j] = buf;
  }
  std::vector<std::string> subjects(scenario.n_subjects);
  for (std::size_t i = 0; i < scenario.n_subjects; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "S%03zu", i + 1);
    subjects[i] = buf;
  }
  return {LongitudinalDataset(std::move(responses), std::move(features), std::move(names), std::move(subjects)),
          std::move(truth)};
}

void export_simulation(const std::filesystem::path& dir, const LongitudinalDataset& dataset,
                       const SimTruth& truth) {
  std::filesystem::create_directories(dir);
  write_long_csv(dir / "data.csv", dataset);
  std::ofstream out(dir / "truth.csv");
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write truth file in " + dir.string());
  out << "feature,is_target\n";
  for (std::size_t j = 0; j < dataset.n_features(); ++j)
    out << dataset.feature_names()[j] << ',' << (truth.is_target(j) ? 1 : 0) << '\n';
}

}  // namespace blog
