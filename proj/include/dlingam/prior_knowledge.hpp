#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/common.hpp"

namespace dlingam {

/// Ternary structural prior: entry (j, i) states whether x_i has a directed
/// path to x_j (1), does not (0), or is unknown (-1). The diagonal is fixed
/// to zero; certain paths both ways between a pair are rejected.
class PriorKnowledge {
 public:
  explicit PriorKnowledge(Eigen::MatrixXi entries) : a_knw_(std::move(entries)) {
    if (a_knw_.rows() != a_knw_.cols())
      throw ValidationError("prior-knowledge matrix must be square");
    if (a_knw_.rows() < 1) throw ValidationError("prior-knowledge matrix is empty");
    for (Eigen::Index j = 0; j < a_knw_.rows(); ++j)
      for (Eigen::Index i = 0; i < a_knw_.cols(); ++i) {
        const int v = a_knw_(j, i);
        if (j == i) {
          if (v != 0) diagonal_ignored_ = true;
          a_knw_(j, i) = 0;
          continue;
        }
        if (v != 0 && v != 1 && v != -1)
          throw ValidationError("prior-knowledge entry at row " + std::to_string(j + 1) +
                                ", column " + std::to_string(i + 1) +
                                " must be one of {0, 1, -1}");
      }
    for (Eigen::Index j = 0; j < a_knw_.rows(); ++j)
      for (Eigen::Index i = j + 1; i < a_knw_.cols(); ++i)
        if (a_knw_(j, i) == 1 && a_knw_(i, j) == 1)
          throw ValidationError("prior knowledge asserts directed paths both ways between variables " +
                                std::to_string(i + 1) + " and " + std::to_string(j + 1));
  }

  static PriorKnowledge all_unknown(int p) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Constant(p, p, -1);
    m.diagonal().setZero();
    return PriorKnowledge(std::move(m));
  }

  int p() const { return static_cast<int>(a_knw_.rows()); }
  int at(int j, int i) const { return a_knw_(j, i); }
  const Eigen::MatrixXi& entries() const { return a_knw_; }

  /// True when the source data carried nonzero diagonal entries that were
  /// discarded during construction.
  bool diagonal_ignored() const { return diagonal_ignored_; }

  /// Reads a p x p CSV of {0, 1, -1}; row j, column i holds the (j, i) entry.
  static PriorKnowledge load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::vector<int>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty()) continue;
      std::vector<int> row;
      std::size_t start = 0;
      int col = 0;
      while (start <= line.size()) {
        ++col;
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) comma = line.size();
        const std::string cell = line.substr(start, comma - start);
        std::size_t pos = 0;
        int value = 0;
        bool ok = !cell.empty();
        if (ok) {
          try {
            value = std::stoi(cell, &pos);
          } catch (const std::exception&) {
            ok = false;
          }
        }
        if (!ok || pos != cell.size() || (value != 0 && value != 1 && value != -1))
          throw IoError(path + ": invalid prior-knowledge value '" + cell + "' at row " +
                        std::to_string(line_no) + ", column " + std::to_string(col));
        row.push_back(value);
        start = comma + 1;
        if (comma == line.size()) break;
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": no rows");
    const auto p = rows.size();
    Eigen::MatrixXi m(p, p);
    for (std::size_t j = 0; j < p; ++j) {
      if (rows[j].size() != p)
        throw IoError(path + ": row " + std::to_string(j + 1) + " has " +
                      std::to_string(rows[j].size()) + " cells, expected " +
                      std::to_string(p));
      for (std::size_t i = 0; i < p; ++i) m(static_cast<Eigen::Index>(j),
                                            static_cast<Eigen::Index>(i)) = rows[j][i];
    }
    try {
      return PriorKnowledge(std::move(m));
    } catch (const ValidationError& e) {
      throw IoError(path + ": " + e.what());
    }
  }

  void save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (Eigen::Index j = 0; j < a_knw_.rows(); ++j) {
      for (Eigen::Index i = 0; i < a_knw_.cols(); ++i) {
        if (i) out << ',';
        out << a_knw_(j, i);
      }
      out << '\n';
    }
  }

 private:
  Eigen::MatrixXi a_knw_;
  bool diagonal_ignored_ = false;
};

}  // namespace dlingam
