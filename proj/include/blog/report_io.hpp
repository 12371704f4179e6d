#pragma once

#include "blog/bayesfactor.hpp"
#include "blog/bglss.hpp"
#include "blog/evalharness.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace blog {

enum class ReportFormat { Csv, Json };

// .csv -> Csv, anything else -> Json.
ReportFormat format_for(const std::filesystem::path& path);

// 17 significant digits; "NA" for NaN.
std::string format_number(double v);

// Raw Bayes factor for display, capped at 1e308.
double bf_display(double log_bf);

nlohmann::json to_json(const ScreenResult& screen);
std::string to_csv(const ScreenResult& screen);

nlohmann::json to_json(const ChainSummary& summary, const std::vector<std::string>& feature_names);
std::string to_csv(const ChainSummary& summary, const std::vector<std::string>& feature_names);

nlohmann::json to_json(const StudyResult& study);
std::string to_csv(const StudyResult& study);

nlohmann::json to_json(const std::vector<GbfReport>& reports);
std::string to_csv(const std::vector<GbfReport>& reports);

void write_text(const std::filesystem::path& path, const std::string& text);

// Raw draw dump: 16-byte header ("BGLS", uint32 version, uint32 draws,
// uint32 params), then draws x params little-endian float64, row-major.
// Per draw: coefficients, tau^2 per group, sigma^2, pi0.
inline constexpr std::uint32_t kDrawFileVersion = 1;
void write_draws(const std::filesystem::path& path, const ChainDraws& draws);

struct DrawFile {
  std::uint32_t version = 0;
  std::uint32_t n_draws = 0;
  std::uint32_t n_params = 0;
  std::vector<double> values;  // row-major
};
DrawFile read_draws(const std::filesystem::path& path);

}  // namespace blog
