#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlingam/common.hpp"

namespace dlingam {

/// Observational sample matrix. Variables are stored contiguously as rows
/// (p x n) so pairwise regressions stream one row pair at a time. Immutable
/// after construction; transformations return new values.
class Dataset {
 public:
  Dataset(Matrix values, std::vector<std::string> labels = {})
      : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw ValidationError("dataset must hold at least one variable and one sample");
    if (!values_.allFinite())
      throw ValidationError("dataset contains non-finite values");
    if (labels_.empty()) {
      labels_.reserve(static_cast<std::size_t>(values_.rows()));
      for (Eigen::Index i = 0; i < values_.rows(); ++i)
        labels_.push_back("x" + std::to_string(i + 1));
    }
    if (static_cast<Eigen::Index>(labels_.size()) != values_.rows())
      throw ValidationError("label count does not match variable count");
  }

  int p() const { return static_cast<int>(values_.rows()); }
  int n() const { return static_cast<int>(values_.cols()); }
  const Matrix& values() const { return values_; }
  Eigen::Ref<const Vector> row(int i) const { return values_.row(i).transpose(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

 private:
  Matrix values_;  // p x n
  std::vector<std::string> labels_;
};

/// Ordered collection of variable subscripts (the working sets of the
/// ordering search). Subscripts are unique and in [0, p).
using VariableSet = std::vector<int>;

inline void validate_variable_set(const VariableSet& set, int p) {
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (int v : set) {
    if (v < 0 || v >= p) throw ValidationError("variable subscript out of range");
    if (seen[static_cast<std::size_t>(v)]) throw ValidationError("duplicate variable subscript");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

/// Subtracts each variable's empirical mean. Idempotent up to roundoff.
inline Dataset center(const Dataset& d) {
  Matrix v = d.values();
  v.colwise() -= v.rowwise().mean();
  return Dataset(std::move(v), d.labels());
}

/// Centers and rescales each variable to unit sample variance (1/n
/// convention). Zero-variance variables are rejected here, not at load time,
/// so generators may hold degenerate raw data.
inline Dataset standardize(const Dataset& d) {
  Matrix v = d.values();
  v.colwise() -= v.rowwise().mean();
  const double n = static_cast<double>(d.n());
  for (int i = 0; i < d.p(); ++i) {
    const double sd = std::sqrt(v.row(i).squaredNorm() / n);
    if (sd == 0.0)
      throw NumericError("variable '" + d.label(i) + "' has zero variance");
    v.row(i) /= sd;
  }
  return Dataset(std::move(v), d.labels());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first == last) return false;
  if (*first == '+') ++first;  // from_chars rejects a leading plus
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc{} && result.ptr == last && std::isfinite(out);
}

}  // namespace detail

/// Reads a comma-separated numeric table. Samples-as-rows is the default
/// orientation; pass samples_as_rows=false for variables-as-rows files (the
/// header line, if declared, is discarded in that mode). Cell coordinates in
/// error messages are 1-based file positions.
inline Dataset load_csv(const std::string& path, bool has_header,
                        bool samples_as_rows = true) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::size_t expected_cells = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      if (in.peek() == std::ifstream::traits_type::eof()) break;  // trailing newline
      throw IoError(path + ": empty line at row " + std::to_string(line_no));
    }
    const auto cells = detail::split_csv_line(line);
    if (line_no == 1 && has_header) {
      if (samples_as_rows)
        for (auto c : cells) labels.emplace_back(c);
      expected_cells = cells.size();
      continue;
    }
    if (expected_cells == 0) expected_cells = cells.size();
    if (cells.size() != expected_cells)
      throw IoError(path + ": row " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(expected_cells));
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_double(cells[c], parsed[c]))
        throw IoError(path + ": cannot parse numeric value at row " +
                      std::to_string(line_no) + ", column " + std::to_string(c + 1));
    }
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw IoError(path + ": no data rows");

  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(expected_cells);
  Matrix values = samples_as_rows ? Matrix(c, r) : Matrix(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) {
      if (samples_as_rows)
        values(j, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      else
        values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

  if (!samples_as_rows) labels.clear();
  if (values.rows() < 2)
    throw IoError(path + ": need at least 2 variables, found " +
                  std::to_string(values.rows()));
  if (values.cols() < 3)
    throw IoError(path + ": need at least 3 samples, found " +
                  std::to_string(values.cols()));
  return Dataset(std::move(values), std::move(labels));
}

}  // namespace dlingam
