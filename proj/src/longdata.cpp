#include "blog/longdata.hpp"

#include "blog/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace blog {

namespace {

bool same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  if (!cell.empty() && cell.back() == '\r') cell.pop_back();
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Strict decimal parse; anything else (empty, trailing junk, nan/inf) is a missing cell.
double parse_cell(const std::string& raw, std::size_t line_no, const std::string& column) {
  const std::string s = trim(raw);
  if (!s.empty()) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(v)) return v;
  }
  throw Error(ErrorCode::MissingCell, "line " + std::to_string(line_no) + ", column '" + column +
                                          "': '" + raw + "' is not a finite number");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_if_needed(const std::string& s, char delim) {
  if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

LongitudinalDataset::LongitudinalDataset(Eigen::MatrixXd responses, std::vector<Eigen::MatrixXd> features,
                                         std::vector<std::string> feature_names,
                                         std::vector<std::string> subject_ids)
    : responses_(std::move(responses)),
      features_(std::move(features)),
      feature_names_(std::move(feature_names)),
      subject_ids_(std::move(subject_ids)) {
  if (responses_.rows() < 1 || responses_.cols() < 1)
    throw Error(ErrorCode::DimensionMismatch, "dataset needs at least one subject and one time point");
  if (features_.empty()) throw Error(ErrorCode::DimensionMismatch, "dataset needs at least one feature");
  if (feature_names_.size() != features_.size())
    throw Error(ErrorCode::DimensionMismatch, "feature_names length differs from feature count");
  if (subject_ids_.size() != n_subjects())
    throw Error(ErrorCode::DimensionMismatch, "subject_ids length differs from subject count");
  if (!responses_.allFinite()) throw Error(ErrorCode::MissingCell, "non-finite response value");
  for (std::size_t j = 0; j < features_.size(); ++j) {
    if (!same_shape(features_[j], responses_))
      throw Error(ErrorCode::DimensionMismatch, "feature '" + feature_names_[j] + "' has wrong shape");
    if (!features_[j].allFinite())
      throw Error(ErrorCode::MissingCell, "non-finite value in feature '" + feature_names_[j] + "'");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names_)
    if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateKey, "duplicate feature name '" + name + "'");
}

LongitudinalDataset LongitudinalDataset::select_features(const std::vector<std::size_t>& columns) const {
  std::vector<Eigen::MatrixXd> f;
  std::vector<std::string> names;
  for (auto c : columns) {
    f.push_back(feature(c));
    names.push_back(feature_names_.at(c));
  }
  return {responses_, std::move(f), std::move(names), subject_ids_};
}

bool operator==(const LongitudinalDataset& a, const LongitudinalDataset& b) {
  if (!same_shape(a.responses_, b.responses_) || a.features_.size() != b.features_.size()) return false;
  if (a.feature_names_ != b.feature_names_ || a.subject_ids_ != b.subject_ids_) return false;
  if (a.responses_ != b.responses_) return false;
  for (std::size_t j = 0; j < a.features_.size(); ++j)
    if (a.features_[j] != b.features_[j]) return false;
  return true;
}

LongitudinalDataset load_long_csv(const std::filesystem::path& path, const ColumnConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_row(line, config.delimiter);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::MissingColumn, "empty file: " + path.string());
  for (auto& h : header) h = trim(h);

  auto column_of = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t subject_col = column_of(config.subject);
  const std::size_t time_col = column_of(config.time);
  const std::size_t response_col = column_of(config.response);

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == subject_col || c == time_col || c == response_col) continue;
    feature_cols.push_back(c);
    feature_names.push_back(header[c]);
  }
  if (feature_cols.empty()) throw Error(ErrorCode::MissingColumn, "no feature columns");

  struct Row {
    double response;
    std::vector<double> values;
  };
  // subject id -> (time -> row)
  std::map<std::string, std::map<double, Row>> panel;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line, config.delimiter);
    if (cells.size() != header.size())
      throw Error(ErrorCode::MissingCell, "line " + std::to_string(line_no) + " has " +
                                              std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(header.size()));
    const std::string subject = trim(cells[subject_col]);
    if (subject.empty())
      throw Error(ErrorCode::MissingCell, "line " + std::to_string(line_no) + ": empty subject id");
    const double time = parse_cell(cells[time_col], line_no, config.time);
    Row row{parse_cell(cells[response_col], line_no, config.response), {}};
    row.values.reserve(feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k)
      row.values.push_back(parse_cell(cells[feature_cols[k]], line_no, feature_names[k]));
    auto [it, inserted] = panel[subject].emplace(time, std::move(row));
    if (!inserted)
      throw Error(ErrorCode::DuplicateKey, "subject '" + subject + "' repeats time " + trim(cells[time_col]));
  }
  if (panel.empty()) throw Error(ErrorCode::RaggedPanel, "no data rows");

  std::size_t n_times = 0;
  for (const auto& [id, rows] : panel) n_times = std::max(n_times, rows.size());
  for (const auto& [id, rows] : panel)
    if (rows.size() != n_times)
      throw Error(ErrorCode::RaggedPanel, "subject '" + id + "' has " + std::to_string(rows.size()) +
                                              " rows, expected " + std::to_string(n_times));

  const auto n = static_cast<Eigen::Index>(panel.size());
  const auto t_count = static_cast<Eigen::Index>(n_times);
  Eigen::MatrixXd responses(n, t_count);
  std::vector<Eigen::MatrixXd> features(feature_cols.size(), Eigen::MatrixXd(n, t_count));
  std::vector<std::string> subject_ids;
  Eigen::Index i = 0;
  for (const auto& [id, rows] : panel) {
    subject_ids.push_back(id);
    Eigen::Index t = 0;
    for (const auto& [time, row] : rows) {
      responses(i, t) = row.response;
      for (std::size_t j = 0; j < features.size(); ++j) features[j](i, t) = row.values[j];
      ++t;
    }
    ++i;
  }
  return {std::move(responses), std::move(features), std::move(feature_names), std::move(subject_ids)};
}

void write_long_csv(const std::filesystem::path& path, const LongitudinalDataset& dataset,
                    const ColumnConfig& config) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  const char d = config.delimiter;
  out << quote_if_needed(config.subject, d) << d << quote_if_needed(config.time, d) << d
      << quote_if_needed(config.response, d);
  for (const auto& name : dataset.feature_names()) out << d << quote_if_needed(name, d);
  out << '\n';
  for (std::size_t i = 0; i < dataset.n_subjects(); ++i) {
    for (std::size_t t = 0; t < dataset.n_times(); ++t) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(t);
      out << quote_if_needed(dataset.subject_ids()[i], d) << d << (t + 1) << d
          << format_double(dataset.responses()(r, c));
      for (const auto& f : dataset.features()) out << d << format_double(f(r, c));
      out << '\n';
    }
  }
}

ValidationReport validate(const LongitudinalDataset& dataset, double variance_floor) {
  ValidationReport report;
  const Eigen::Index t = static_cast<Eigen::Index>(dataset.n_times());
  if (t < 2) return report;
  for (std::size_t j = 0; j < dataset.n_features(); ++j) {
    const auto& f = dataset.feature(j);
    const Eigen::MatrixXd diff = f.rightCols(t - 1) - f.leftCols(t - 1);
    if ((diff.array() == 0.0).all()) {
      report.constant_features.push_back(j);
    } else if (diff.squaredNorm() / static_cast<double>(diff.size()) < variance_floor) {
      report.near_constant_features.push_back(j);
    }
  }
  return report;
}

}  // namespace blog
