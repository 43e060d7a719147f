#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlingam/common.hpp"

namespace dlingam {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Graphviz rendering of a direct-effect matrix: one edge j -> i per nonzero
/// b(i, j), labeled with the coefficient to two decimals. Nodes appear in
/// index order; edges in (target, source) scan order. When significance marks
/// are given, significant edges are drawn solid and bold, the rest dashed.
inline std::string export_dot(const Matrix& b, const std::vector<std::string>& labels,
                              const Eigen::MatrixXi* significant = nullptr) {
  if (b.rows() != b.cols()) throw ValidationError("adjacency matrix must be square");
  if (static_cast<Eigen::Index>(labels.size()) != b.rows())
    throw ValidationError("label count does not match matrix size");
  std::string out = "digraph {\n";
  for (const auto& label : labels) out += "  \"" + detail::dot_escape(label) + "\";\n";
  char buf[64];
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (b(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.2f", b(i, j));
      out += "  \"" + detail::dot_escape(labels[static_cast<std::size_t>(j)]) +
             "\" -> \"" + detail::dot_escape(labels[static_cast<std::size_t>(i)]) +
             "\" [label=\"" + buf + "\"";
      if (significant)
        out += (*significant)(i, j) ? ", style=solid, penwidth=2" : ", style=dashed";
      out += "];\n";
    }
  out += "}\n";
  return out;
}

/// Same graph as JSON for programmatic consumers.
inline std::string export_graph_json(const Matrix& b,
                                     const std::vector<std::string>& labels,
                                     const Eigen::MatrixXi* significant = nullptr) {
  if (b.rows() != b.cols()) throw ValidationError("adjacency matrix must be square");
  if (static_cast<Eigen::Index>(labels.size()) != b.rows())
    throw ValidationError("label count does not match matrix size");
  nlohmann::json graph;
  graph["nodes"] = labels;
  graph["edges"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (b(i, j) == 0.0) continue;
      nlohmann::json edge;
      edge["source"] = labels[static_cast<std::size_t>(j)];
      edge["target"] = labels[static_cast<std::size_t>(i)];
      edge["coefficient"] = b(i, j);
      if (significant) edge["significant"] = (*significant)(i, j) != 0;
      graph["edges"].push_back(edge);
    }
  return graph.dump(2) + "\n";
}

}  // namespace dlingam
