#include "blog/report_io.hpp"

#include "blog/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace blog {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 8);
}

double get_f64(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

ReportFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ReportFormat::Csv : ReportFormat::Json;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double bf_display(double log_bf) {
  static const double cap = std::log(1e308);
  return log_bf >= cap ? 1e308 : std::exp(log_bf);
}

json to_json(const ScreenResult& screen) {
  json reports = json::array();
  for (const auto& r : screen.reports) {
    reports.push_back({{"rank", r.rank},
                       {"feature", r.feature_name},
                       {"two_log_bf", number(r.two_log_bf)},
                       {"bf_display", number(bf_display(r.log_bf))},
                       {"evidence", std::string(to_string(r.evidence))},
                       {"decisive", r.decisive},
                       {"g_used", number(r.g_used)},
                       {"g_floored", r.g_floored},
                       {"r_squared", number(r.r_squared)}});
  }
  json skipped = json::array();
  for (const auto& s : screen.skipped) skipped.push_back({{"feature", s.feature_name}, {"reason", s.reason}});
  return {{"reports", reports}, {"skipped", skipped}};
}

std::string to_csv(const ScreenResult& screen) {
  std::ostringstream out;
  out << "rank,feature,two_log_bf,bf_display,evidence,decisive,g_used,r_squared\n";
  for (const auto& r : screen.reports) {
    out << r.rank << ',' << r.feature_name << ',' << format_number(r.two_log_bf) << ','
        << format_number(bf_display(r.log_bf)) << ',' << to_string(r.evidence) << ','
        << (r.decisive ? "true" : "false") << ',' << format_number(r.g_used) << ','
        << format_number(r.r_squared) << '\n';
  }
  for (const auto& s : screen.skipped) out << "NA," << s.feature_name << ",NA,NA,SkippedSingular,false,NA,NA\n";
  return out.str();
}

json to_json(const ChainSummary& summary, const std::vector<std::string>& feature_names) {
  json groups = json::array();
  for (std::size_t g = 0; g < summary.group_medians.size(); ++g) {
    const auto j = summary.feature_index[g];
    json med = json::array();
    for (Eigen::Index c = 0; c < summary.group_medians[g].size(); ++c) med.push_back(summary.group_medians[g](c));
    groups.push_back({{"feature", j < feature_names.size() ? feature_names[j] : std::to_string(j)},
                      {"selected", static_cast<bool>(summary.selected[g])},
                      {"inclusion_prop", summary.inclusion_prop[g]},
                      {"medians", med}});
  }
  return {{"groups", groups},
          {"lambda_trace", summary.lambda_trace},
          {"lambda_final", summary.lambda_final},
          {"sigma2", {{"mean", summary.sigma2_summary.mean},
                      {"lower95", summary.sigma2_summary.lower},
                      {"upper95", summary.sigma2_summary.upper}}},
          {"pi0_mean", summary.pi0_mean}};
}

std::string to_csv(const ChainSummary& summary, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& m : summary.group_medians) width = std::max(width, static_cast<std::size_t>(m.size()));
  out << "feature,selected,inclusion_prop";
  for (std::size_t c = 0; c < width; ++c) out << ",median_" << (c + 1);
  out << '\n';
  for (std::size_t g = 0; g < summary.group_medians.size(); ++g) {
    const auto j = summary.feature_index[g];
    out << (j < feature_names.size() ? feature_names[j] : std::to_string(j)) << ','
        << (summary.selected[g] ? "true" : "false") << ',' << format_number(summary.inclusion_prop[g]);
    for (std::size_t c = 0; c < width; ++c) {
      const auto& m = summary.group_medians[g];
      out << ',' << (c < static_cast<std::size_t>(m.size()) ? format_number(m(static_cast<Eigen::Index>(c))) : "");
    }
    out << '\n';
  }
  return out.str();
}

json to_json(const StudyResult& study) {
  json reps = json::array();
  for (std::size_t k = 0; k < study.per_replicate.size(); ++k) {
    const auto& o = study.per_replicate[k];
    reps.push_back({{"replicate", study.replicate_index[k]},
                    {"selected", o.selected},
                    {"true_positives", o.true_positives},
                    {"false_positives", o.false_positives},
                    {"fpr", o.fpr},
                    {"tpr", o.tpr}});
  }
  json curve = json::array();
  for (const auto& p : study.threshold_curve)
    curve.push_back({{"two_log_bf", p.two_log_bf}, {"mean_fpr", p.mean_fpr}, {"mean_tpr", p.mean_tpr}});
  json failures = json::array();
  for (const auto& f : study.failures) failures.push_back({{"replicate", f.replicate}, {"message", f.message}});
  return {{"kind", study.kind},
          {"preset", study.preset},
          {"seed", study.seed},
          {"replicates", study.replicates},
          {"mean_fpr", number(study.mean_fpr)},
          {"mean_tpr", number(study.mean_tpr)},
          {"all_targets_selected", study.all_targets_selected},
          {"selection_counts", study.selection_counts},
          {"threshold_curve", curve},
          {"per_replicate", reps},
          {"failures", failures},
          {"failed", study.failed()}};
}

std::string to_csv(const StudyResult& study) {
  std::ostringstream out;
  out << "section,replicate,two_log_bf,fpr,tpr,n_selected\n";
  for (std::size_t k = 0; k < study.per_replicate.size(); ++k) {
    const auto& o = study.per_replicate[k];
    out << "replicate," << study.replicate_index[k] << ",NA," << format_number(o.fpr) << ','
        << format_number(o.tpr) << ',' << o.selected.size() << '\n';
  }
  for (const auto& p : study.threshold_curve)
    out << "curve,NA," << format_number(p.two_log_bf) << ',' << format_number(p.mean_fpr) << ','
        << format_number(p.mean_tpr) << ",NA\n";
  out << "mean,NA,NA," << format_number(study.mean_fpr) << ',' << format_number(study.mean_tpr) << ",NA\n";
  for (const auto& f : study.failures) out << "failure," << f.replicate << ",NA,NA,NA,NA\n";
  return out.str();
}

json to_json(const std::vector<GbfReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back({{"feature", r.feature_name}, {"log_gbf", number(r.log_gbf)}});
  return {{"reports", out}};
}

std::string to_csv(const std::vector<GbfReport>& reports) {
  std::ostringstream out;
  out << "feature,log_gbf\n";
  for (const auto& r : reports) out << r.feature_name << ',' << format_number(r.log_gbf) << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << text;
}

void write_draws(const std::filesystem::path& path, const ChainDraws& draws) {
  const auto n = draws.beta.rows();
  const auto params = draws.beta.cols() + draws.tau2.cols() + 2;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out.write("BGLS", 4);
  put_u32(out, kDrawFileVersion);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(params));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < draws.beta.cols(); ++c) put_f64(out, draws.beta(r, c));
    for (Eigen::Index c = 0; c < draws.tau2.cols(); ++c) put_f64(out, draws.tau2(r, c));
    put_f64(out, draws.sigma2(r));
    put_f64(out, draws.pi0(r));
  }
}

DrawFile read_draws(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "BGLS", 4) != 0)
    throw Error(ErrorCode::InvalidArgument, "not a draw file: " + path.string());
  DrawFile f;
  f.version = get_u32(bytes.data() + 4);
  f.n_draws = get_u32(bytes.data() + 8);
  f.n_params = get_u32(bytes.data() + 12);
  const std::size_t count = static_cast<std::size_t>(f.n_draws) * f.n_params;
  if (bytes.size() != 16 + 8 * count) throw Error(ErrorCode::InvalidArgument, "truncated draw file");
  f.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) f.values[i] = get_f64(bytes.data() + 16 + 8 * i);
  return f;
}

}  // namespace blog
