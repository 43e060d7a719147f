#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/kernel_mi.hpp"
#include "dlingam/prior_knowledge.hpp"

namespace dlingam {

/// Direct-effect matrix b(i, j) = strength of x_j -> x_i, together with the
/// causal ordering under which it is strictly lower triangular.
struct AdjacencyMatrix {
  Matrix b;
  CausalOrdering ordering;
};

/// Mixing matrix A = (I - B)^-1; a(i, j) is the total causal effect of x_j
/// on x_i. Its diagonal is exactly one.
struct TotalEffects {
  Matrix a;
};

/// Diagnostics from one ordering search.
struct DiscoveryStats {
  long long kgv_evaluations = 0;
  int rounds = 0;
  double seconds = 0.0;
};

namespace detail {

/// Per-round working state: rows of `data` are the current residuals of the
/// variables listed in `subscripts` (original numbering).
struct WorkingData {
  Matrix data;
  VariableSet subscripts;

  int position_of(int subscript) const {
    for (std::size_t k = 0; k < subscripts.size(); ++k)
      if (subscripts[k] == subscript) return static_cast<int>(k);
    throw ValidationError("subscript not active");
  }
};

/// Residual rows of every active variable against candidate j, honoring the
/// prior: rows i with knw(i, j) == 0 are known not to receive j's effect and
/// are kept verbatim.
inline Matrix residual_rows_for_candidate(const WorkingData& w, int j_pos,
                                          const PriorKnowledge& knw) {
  const auto n = w.data.cols();
  const auto k = static_cast<Eigen::Index>(w.subscripts.size());
  Matrix out(k - 1, n);
  const int j = w.subscripts[static_cast<std::size_t>(j_pos)];
  Eigen::Index r = 0;
  for (Eigen::Index pos = 0; pos < k; ++pos) {
    if (pos == j_pos) continue;
    const int i = w.subscripts[static_cast<std::size_t>(pos)];
    if (knw.at(i, j) == 0)
      out.row(r) = w.data.row(pos);
    else
      out.row(r) = simple_regress_residual(w.data.row(pos).transpose(),
                                           w.data.row(j_pos).transpose())
                       .transpose();
    ++r;
  }
  return out;
}

}  // namespace detail

/// Subscript in `active` whose residual independence statistic T is minimal;
/// ties break to the smallest subscript.
inline int select_exogenous(const Dataset& d, const VariableSet& active,
                            const KernelParams& params) {
  if (active.size() < 2) throw ValidationError("need at least 2 active variables");
  validate_variable_set(active, d.p());
  int best = -1;
  double best_t = std::numeric_limits<double>::infinity();
  VariableSet sorted = active;
  std::sort(sorted.begin(), sorted.end());
  for (int j : sorted) {
    const double t = t_kernel(d, j, active, params);
    if (t < best_t) {
      best_t = t;
      best = j;
    }
  }
  return best;
}

/// Estimates a causal ordering by repeatedly selecting the most independent
/// variable and replacing the working data with its residual matrix. Runs
/// exactly p-1 selection rounds. Prior knowledge, when present, narrows each
/// round's candidate set and skips residuals that are known to be unaffected.
inline CausalOrdering discover_order(const Dataset& d, const KernelParams& params,
                                     const PriorKnowledge* prior = nullptr,
                                     int threads = 1,
                                     DiscoveryStats* stats = nullptr) {
  params.validate();
  const int p = d.p();
  if (prior && prior->p() != p)
    throw ValidationError("prior-knowledge size does not match variable count");
  const PriorKnowledge knw = prior ? *prior : PriorKnowledge::all_unknown(p);

  const auto t_start = std::chrono::steady_clock::now();
  detail::WorkingData w;
  w.data = d.values();
  w.data.colwise() -= w.data.rowwise().mean();
  w.subscripts.resize(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) w.subscripts[static_cast<std::size_t>(i)] = i;

  CausalOrdering order;
  order.reserve(static_cast<std::size_t>(p));
  long long kgv_count = 0;

  for (int round = 0; round < p - 1; ++round) {
    const auto& active = w.subscripts;

    // Narrow by prior knowledge: certified-exogenous variables first,
    // otherwise drop the certified-endogenous ones.
    VariableSet exo;
    for (int j : active) {
      bool all_zero = true;
      for (int i : active)
        if (i != j && knw.at(j, i) != 0) {
          all_zero = false;
          break;
        }
      if (all_zero) exo.push_back(j);
    }

    int chosen;
    if (!exo.empty()) {
      chosen = *std::min_element(exo.begin(), exo.end());
    } else {
      VariableSet candidates;
      for (int j : active) {
        bool endogenous = false;
        for (int i : active)
          if (i != j && knw.at(j, i) == 1) {
            endogenous = true;
            break;
          }
        if (!endogenous) candidates.push_back(j);
      }
      if (candidates.empty())
        throw ValidationError("prior knowledge marks every remaining variable endogenous (round " +
                              std::to_string(round + 1) + ")");
      if (candidates.size() == 1) {
        chosen = candidates.front();
      } else {
        std::sort(candidates.begin(), candidates.end());
        std::vector<double> t_values(candidates.size());
        const int tasks = static_cast<int>(candidates.size());
        try {
          parallel_for(tasks, threads, [&](int c) {
            const int j = candidates[static_cast<std::size_t>(c)];
            const int j_pos = w.position_of(j);
            const Matrix residuals = detail::residual_rows_for_candidate(w, j_pos, knw);
            const KernelFactor fj =
                kernel_factor(w.data.row(j_pos).transpose(), params);
            double t = 0.0;
            for (Eigen::Index r = 0; r < residuals.rows(); ++r)
              t += kgv_mi_from_factors(
                  fj, kernel_factor(residuals.row(r).transpose(), params));
            t_values[static_cast<std::size_t>(c)] = t;
          });
        } catch (const NumericError& e) {
          throw NumericError("round " + std::to_string(round + 1) + ": " + e.what());
        }
        kgv_count += static_cast<long long>(candidates.size()) *
                     static_cast<long long>(active.size() - 1);
        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c)
          if (t_values[c] < t_values[best]) best = c;
        chosen = candidates[best];
      }
    }

    // Remove the chosen variable's effect; its residual matrix becomes the
    // next round's working data.
    Matrix next;
    try {
      next = detail::residual_rows_for_candidate(w, w.position_of(chosen), knw);
    } catch (const NumericError& e) {
      throw NumericError("round " + std::to_string(round + 1) + ": " + e.what());
    }
    VariableSet next_subs;
    for (int i : active)
      if (i != chosen) next_subs.push_back(i);
    w.data = std::move(next);
    w.subscripts = std::move(next_subs);
    order.push_back(chosen);
  }
  order.push_back(w.subscripts.front());

  if (stats) {
    stats->kgv_evaluations = kgv_count;
    stats->rounds = p - 1;
    stats->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
  }
  return order;
}

/// Least-squares connection strengths under a fixed ordering: each variable
/// is regressed on all of its predecessors in K. Entries for later variables
/// are exactly zero; sparsification is a separate pruning step.
inline AdjacencyMatrix estimate_b(const Dataset& d, const CausalOrdering& k) {
  const int p = d.p();
  validate_ordering(k, p);
  Matrix centered = d.values();
  centered.colwise() -= centered.rowwise().mean();

  Matrix b = Matrix::Zero(p, p);
  for (std::size_t pos = 1; pos < k.size(); ++pos) {
    const int i = k[pos];
    Matrix preds(pos, d.n());
    for (std::size_t q = 0; q < pos; ++q) preds.row(static_cast<Eigen::Index>(q)) = centered.row(k[q]);
    Vector coef;
    try {
      coef = multi_regress(centered.row(i).transpose(), preds);
    } catch (const NumericError& e) {
      throw NumericError("variable '" + d.label(i) + "': " + e.what());
    }
    for (std::size_t q = 0; q < pos; ++q) b(i, k[q]) = coef(static_cast<Eigen::Index>(q));
  }
  return AdjacencyMatrix{std::move(b), k};
}

/// A = (I - B)^-1 by forward substitution in causal order. The diagonal comes
/// out exactly one and (I - B) A = I holds to roundoff.
inline TotalEffects total_effects(const AdjacencyMatrix& adj) {
  const auto p = adj.b.rows();
  validate_ordering(adj.ordering, static_cast<int>(p));
  if (!is_strictly_lower_triangular_under(adj.b, adj.ordering))
    throw ValidationError("adjacency matrix is not strictly triangular under its ordering");

  const auto& k = adj.ordering;
  Matrix a_perm = Matrix::Zero(p, p);
  // Solve (I - Bp) Ap = I where Bp is strictly lower triangular.
  for (Eigen::Index col = 0; col < p; ++col) {
    for (Eigen::Index row = 0; row < p; ++row) {
      double sum = row == col ? 1.0 : 0.0;
      for (Eigen::Index t = 0; t < row; ++t)
        sum += adj.b(k[static_cast<std::size_t>(row)], k[static_cast<std::size_t>(t)]) *
               a_perm(t, col);
      a_perm(row, col) = sum;
    }
  }
  Matrix a(p, p);
  for (Eigen::Index r = 0; r < p; ++r)
    for (Eigen::Index c = 0; c < p; ++c)
      a(k[static_cast<std::size_t>(r)], k[static_cast<std::size_t>(c)]) = a_perm(r, c);
  return TotalEffects{std::move(a)};
}

/// Coefficient of determination of variable i under the fitted matrix:
/// 1 - var(residual) / var(x_i), clamped to [0, 1].
inline double r_squared(const Dataset& d, const AdjacencyMatrix& adj, int i) {
  if (i < 0 || i >= d.p()) throw ValidationError("variable subscript out of range");
  Matrix centered = d.values();
  centered.colwise() -= centered.rowwise().mean();
  const double var_i = centered.row(i).squaredNorm() / static_cast<double>(d.n());
  if (var_i == 0.0)
    throw NumericError("variable '" + d.label(i) + "' has zero variance");
  const Vector residual =
      (centered.row(i) - adj.b.row(i) * centered).transpose();
  const double ratio = (residual.squaredNorm() / static_cast<double>(d.n())) / var_i;
  return std::clamp(1.0 - ratio, 0.0, 1.0);
}

}  // namespace dlingam
