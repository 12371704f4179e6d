// blog: Bayesian variable selection for short longitudinal omics panels.

#include "blog/bayesfactor.hpp"
#include "blog/bglss.hpp"
#include "blog/deltadesign.hpp"
#include "blog/error.hpp"
#include "blog/evalharness.hpp"
#include "blog/longdata.hpp"
#include "blog/report_io.hpp"
#include "blog/simgen.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct DataOptions {
  std::string path;
  blog::ColumnConfig columns;
  std::string delimiter = ",";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data", path, "Longitudinal CSV (one row per subject and time)")->required();
    cmd->add_option("--subject", columns.subject, "Subject id column")->capture_default_str();
    cmd->add_option("--time", columns.time, "Time column (ordering only)")->capture_default_str();
    cmd->add_option("--response", columns.response, "Response column")->capture_default_str();
    cmd->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
  }

  blog::LongitudinalDataset load() {
    if (delimiter.size() != 1) throw blog::Error(blog::ErrorCode::InvalidArgument, "delimiter must be one character");
    columns.delimiter = delimiter[0];
    return blog::load_long_csv(path, columns);
  }
};

blog::GPriorSpec parse_g_rule(const std::string& rule) {
  if (rule == "sqrtn") return blog::GPriorSpec::sqrt_n();
  if (rule == "sure") return blog::GPriorSpec::sure_min();
  if (rule.rfind("fixed:", 0) == 0) {
    const std::string value = rule.substr(6);
    char* end = nullptr;
    const double g = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
      throw blog::Error(blog::ErrorCode::InvalidArgument, "bad fixed g '" + value + "'");
    if (!(g > 0.0)) throw blog::Error(blog::ErrorCode::InvalidArgument, "fixed g must be positive");
    return blog::GPriorSpec::fixed(g);
  }
  throw blog::Error(blog::ErrorCode::InvalidArgument, "g rule must be sqrtn, sure or fixed:VALUE");
}

blog::JumpMode parse_jump(const std::string& s) {
  if (s == "uniform") return blog::JumpMode::Uniform;
  if (s == "ramp") return blog::JumpMode::Ramp;
  throw blog::Error(blog::ErrorCode::InvalidArgument, "--dmu must be uniform or ramp");
}

template <typename T>
void emit(const std::string& out, const T& value) {
  if (blog::format_for(out) == blog::ReportFormat::Csv) {
    blog::write_text(out, blog::to_csv(value));
  } else {
    blog::write_text(out, blog::to_json(value).dump(2) + "\n");
  }
}

struct GibbsOptions {
  blog::GibbsConfig config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--iters", config.n_iter, "Main-chain sweeps")->capture_default_str();
    cmd->add_option("--burnin", config.burn_in, "Discarded sweeps of the main chain")->capture_default_str();
    cmd->add_option("--mcem-rounds", config.mcem_rounds, "Monte Carlo EM rounds for lambda")->capture_default_str();
    cmd->add_option("--mcem-iters", config.mcem_inner_iters, "Sweeps per MC-EM round")->capture_default_str();
    cmd->add_option("--lambda", config.lambda_init, "Initial lambda")->capture_default_str();
    cmd->add_option("--pi0-a", config.pi0_beta_a, "Beta prior a for pi0")->capture_default_str();
    cmd->add_option("--pi0-b", config.pi0_beta_b, "Beta prior b for pi0")->capture_default_str();
    cmd->add_flag("!--no-standardize", config.standardize, "Sample on the raw column scale");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian variable selection for short-term longitudinal omics data"};
  app.require_subcommand(1);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Write a simulated panel and its truth sidecar");
  std::string sim_preset = "s100";
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  std::string sim_dmu = "uniform";
  std::uint64_t sim_replicate = 0;
  simulate_cmd->add_option("--preset", sim_preset, "s30, s100 or s350")->capture_default_str();
  simulate_cmd->add_option("--seed", sim_seed)->capture_default_str();
  simulate_cmd->add_option("--replicate", sim_replicate, "Replicate key of the generator")->capture_default_str();
  simulate_cmd->add_option("--dmu", sim_dmu, "Target jump: uniform or ramp")->capture_default_str();
  simulate_cmd->add_option("--out", sim_out, "Output directory")->required();

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Report constant and near-constant features");
  DataOptions validate_data;
  validate_data.add_to(validate_cmd);

  // screen
  auto* screen_cmd = app.add_subcommand("screen", "Per-feature g-prior Bayes factor screen");
  DataOptions screen_data;
  screen_data.add_to(screen_cmd);
  std::string screen_g = "sqrtn";
  std::string screen_out;
  screen_cmd->add_option("--g", screen_g, "sqrtn, sure or fixed:VALUE")->capture_default_str();
  screen_cmd->add_option("--out", screen_out, "Report path (.csv or .json)")->required();

  // fit-group
  auto* fit_cmd = app.add_subcommand("fit-group", "Spike-and-slab group lasso over all features");
  DataOptions fit_data;
  fit_data.add_to(fit_cmd);
  GibbsOptions fit_gibbs;
  fit_gibbs.add_to(fit_cmd);
  std::uint64_t fit_seed = 1;
  std::string fit_out;
  std::string fit_dump;
  fit_cmd->add_option("--seed", fit_seed)->capture_default_str();
  fit_cmd->add_option("--out", fit_out, "Summary path (.csv or .json)")->required();
  fit_cmd->add_option("--dump-draws", fit_dump, "Write post-burn-in draws to this binary file");

  // study-uni
  auto* uni_cmd = app.add_subcommand("study-uni", "Replicated univariate simulation study");
  std::string uni_preset = "s100";
  std::string uni_g = "sqrtn";
  std::size_t uni_reps = 25;
  std::uint64_t uni_seed = 1;
  std::string uni_out;
  std::string uni_dmu = "uniform";
  bool uni_full = false;
  uni_cmd->add_option("--preset", uni_preset)->capture_default_str();
  uni_cmd->add_option("--g", uni_g, "sqrtn, sure or fixed:VALUE")->capture_default_str();
  uni_cmd->add_option("--reps", uni_reps)->capture_default_str();
  uni_cmd->add_option("--seed", uni_seed)->capture_default_str();
  uni_cmd->add_option("--dmu", uni_dmu, "Target jump: uniform or ramp")->capture_default_str();
  uni_cmd->add_flag("--full", uni_full, "Run 100 replicates");
  uni_cmd->add_option("--out", uni_out, "Result path (.csv or .json)")->required();

  // study-multi
  auto* multi_cmd = app.add_subcommand("study-multi", "Replicated group lasso simulation study");
  std::string multi_preset = "s30";
  std::size_t multi_reps = 20;
  std::uint64_t multi_seed = 1;
  std::string multi_out;
  std::string multi_dmu = "uniform";
  bool multi_full = false;
  GibbsOptions multi_gibbs;
  multi_gibbs.add_to(multi_cmd);
  multi_cmd->add_option("--preset", multi_preset)->capture_default_str();
  multi_cmd->add_option("--reps", multi_reps)->capture_default_str();
  multi_cmd->add_option("--seed", multi_seed)->capture_default_str();
  multi_cmd->add_option("--dmu", multi_dmu, "Target jump: uniform or ramp")->capture_default_str();
  multi_cmd->add_flag("--full", multi_full, "Run 100 replicates");
  multi_cmd->add_option("--out", multi_out, "Result path (.csv or .json)")->required();

  // gbf
  auto* gbf_cmd = app.add_subcommand("gbf", "Auxiliary Maruyama-George g-prior Bayes factor screen");
  DataOptions gbf_data;
  gbf_data.add_to(gbf_cmd);
  std::string gbf_mode = "features";
  std::string gbf_out;
  gbf_cmd->add_option("--mode", gbf_mode, "features (one per feature) or joint (all features)")
      ->capture_default_str();
  gbf_cmd->add_option("--out", gbf_out, "Report path (.csv or .json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate_cmd) {
      auto scenario = blog::preset(blog::parse_preset(sim_preset), sim_seed);
      scenario.jump = parse_jump(sim_dmu);
      scenario.replicate = sim_replicate;
      const auto [data, truth] = blog::simulate(scenario);
      blog::export_simulation(sim_out, data, truth);
    } else if (*validate_cmd) {
      const auto data = validate_data.load();
      const auto report = blog::validate(data);
      for (auto j : report.constant_features) std::cout << "constant," << data.feature_names()[j] << '\n';
      for (auto j : report.near_constant_features) std::cout << "near_constant," << data.feature_names()[j] << '\n';
      std::cerr << data.n_subjects() << " subjects, " << data.n_times() << " times, " << data.n_features()
                << " features\n";
      return report.clean() ? 0 : kExitValidation;
    } else if (*screen_cmd) {
      const auto spec = parse_g_rule(screen_g);
      const auto data = screen_data.load();
      emit(screen_out, blog::univariate_screen(data, spec));
    } else if (*fit_cmd) {
      const auto data = fit_data.load();
      auto config = fit_gibbs.config;
      config.seed = fit_seed;
      config.keep_draws = !fit_dump.empty();
      const auto summary = blog::run_gibbs(blog::build_multivariate_design(data), config);
      if (blog::format_for(fit_out) == blog::ReportFormat::Csv) {
        blog::write_text(fit_out, blog::to_csv(summary, data.feature_names()));
      } else {
        blog::write_text(fit_out, blog::to_json(summary, data.feature_names()).dump(2) + "\n");
      }
      if (summary.draws) blog::write_draws(fit_dump, *summary.draws);
    } else if (*uni_cmd) {
      blog::StudyOptions options;
      options.replicates = uni_full ? 100 : uni_reps;
      options.seed = uni_seed;
      options.jump = parse_jump(uni_dmu);
      const auto study = blog::run_univariate_study(blog::parse_preset(uni_preset), parse_g_rule(uni_g), options);
      emit(uni_out, study);
      if (study.failed()) return kExitNumerical;
    } else if (*multi_cmd) {
      blog::StudyOptions options;
      options.replicates = multi_full ? 100 : multi_reps;
      options.seed = multi_seed;
      options.jump = parse_jump(multi_dmu);
      const auto study =
          blog::run_multivariate_study(blog::parse_preset(multi_preset), multi_gibbs.config, options);
      emit(multi_out, study);
      if (study.failed()) return kExitNumerical;
    } else if (*gbf_cmd) {
      const auto data = gbf_data.load();
      if (gbf_mode == "features") {
        emit(gbf_out, blog::gbf_screen(data));
      } else if (gbf_mode == "joint") {
        const auto design = blog::build_multivariate_design(data);
        std::vector<blog::GbfReport> joint{{0, "all_features", blog::maruyama_george_gbf(design.x, design.y)}};
        emit(gbf_out, joint);
      } else {
        throw blog::Error(blog::ErrorCode::InvalidArgument, "--mode must be features or joint");
      }
    }
  } catch (const blog::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return blog::is_numerical(e.code()) ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
