#pragma once

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/direct_lingam.hpp"

namespace dlingam {

/// Tuning knobs for the adaptive-lasso pruner. An empty lambda_grid requests
/// the automatic grid: lambda_grid_size log-spaced points from lambda_max down
/// to lambda_min_ratio * lambda_max.
struct LassoConfig {
  std::vector<double> lambda_grid;           // descending when given
  std::vector<double> gamma_grid{0.5, 1.0, 2.0};
  int folds = 5;
  int max_iter = 100000;                     // coordinate-descent sweep cap
  double tol = 1e-8;                         // max coefficient change to stop
  int lambda_grid_size = 50;
  double lambda_min_ratio = 1e-3;
  double cv_se_fraction = 1.0;               // sparsity preference, in SEs of CV error
  bool refit = false;                        // OLS refit on the selected support
  std::uint64_t cv_seed = 0;                 // fold-shuffle seed, echoed in outputs

  void validate() const {
    if (folds < 2) throw ValidationError("folds must be >= 2");
    if (gamma_grid.empty()) throw ValidationError("gamma grid is empty");
    if (!(tol > 0.0)) throw ValidationError("tol must be positive");
    if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
    for (double g : gamma_grid)
      if (!(g > 0.0)) throw ValidationError("gamma values must be positive");
    if (cv_se_fraction < 0.0)
      throw ValidationError("cv_se_fraction must be nonnegative");
    for (double l : lambda_grid)
      if (!(l > 0.0)) throw ValidationError("lambda values must be positive");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
      if (lambda_grid[i] >= lambda_grid[i - 1])
        throw ValidationError("lambda grid must be strictly descending");
    if (lambda_grid.empty()) {
      if (lambda_grid_size < 1) throw ValidationError("lambda_grid_size must be >= 1");
      if (!(lambda_min_ratio > 0.0 && lambda_min_ratio <= 1.0))
        throw ValidationError("lambda_min_ratio must be in (0, 1]");
    }
  }
};

/// Smallest lambda at which the weighted objective
/// (1/n)||y - X^T b||^2 + lambda * sum_j w_j |b_j| zeroes every coefficient.
inline double lasso_lambda_max(const Eigen::Ref<const Vector>& y, const Matrix& x_rows,
                               const Vector& weights) {
  const double n = static_cast<double>(y.size());
  double lam = 0.0;
  for (Eigen::Index j = 0; j < x_rows.rows(); ++j) {
    const double w = weights(j);
    if (!std::isfinite(w) || w <= 0.0) continue;
    lam = std::max(lam, 2.0 * std::abs(x_rows.row(j).dot(y)) / (n * w));
  }
  return lam;
}

/// Cyclic coordinate descent on (1/n)||y - X^T b||^2 + lambda sum_j w_j |b_j|.
/// X rows are the regressors. An optional warm start accelerates path fits.
inline Vector lasso_coordinate_descent(const Eigen::Ref<const Vector>& y,
                                       const Matrix& x_rows, const Vector& weights,
                                       double lambda, const LassoConfig& cfg,
                                       const Vector* warm_start = nullptr) {
  cfg.validate();
  const auto k = x_rows.rows();
  const auto n = y.size();
  if (x_rows.cols() != n)
    throw ValidationError("regressor rows and response have different lengths");
  if (weights.size() != k)
    throw ValidationError("one penalty weight per regressor required");
  if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
  for (Eigen::Index j = 0; j < k; ++j)
    if (!(weights(j) > 0.0) || !std::isfinite(weights(j)))
      throw ValidationError("penalty weights must be finite and positive");
  if (k == 0) return Vector(0);

  const double inv_n = 1.0 / static_cast<double>(n);
  Vector col_sq(k);
  for (Eigen::Index j = 0; j < k; ++j) col_sq(j) = x_rows.row(j).squaredNorm() * inv_n;

  Vector b = warm_start && warm_start->size() == k ? *warm_start : Vector::Zero(k);
  Vector residual = y - x_rows.transpose() * b;

  const auto soft = [](double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
  };

  double max_delta = 0.0;
  for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
    max_delta = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (col_sq(j) == 0.0) {
        b(j) = 0.0;
        continue;
      }
      const double old = b(j);
      const double rho = x_rows.row(j).dot(residual) * inv_n + col_sq(j) * old;
      const double next = soft(rho, lambda * weights(j) / 2.0) / col_sq(j);
      if (next != old) {
        residual.noalias() -= (next - old) * x_rows.row(j).transpose();
        b(j) = next;
        max_delta = std::max(max_delta, std::abs(next - old));
      }
    }
    if (max_delta <= cfg.tol) {
      // Coefficients indistinguishable from zero at roundoff scale are
      // knife-edge soft-threshold leftovers; report them as exact zeros.
      const double snap = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < k; ++j)
        if (b(j) != 0.0 && std::abs(b(j)) < snap) b(j) = 0.0;
      return b;
    }
  }
  throw NumericError("coordinate descent did not converge after " +
                     std::to_string(cfg.max_iter) + " sweeps (last change " +
                     std::to_string(max_delta) + ")");
}

namespace detail {

inline std::vector<double> auto_lambda_grid(double lambda_max, const LassoConfig& cfg) {
  std::vector<double> grid;
  if (lambda_max <= 0.0) return grid;
  const int m = cfg.lambda_grid_size;
  grid.reserve(static_cast<std::size_t>(m));
  if (m == 1) {
    grid.push_back(lambda_max);
    return grid;
  }
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * cfg.lambda_min_ratio);
  for (int i = 0; i < m; ++i)
    grid.push_back(std::exp(log_max + (log_min - log_max) * i / (m - 1)));
  return grid;
}

/// Contiguous fold blocks over a seeded shuffle of the sample indices.
inline std::vector<std::vector<int>> cv_folds(int n, int folds, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    const int lo = static_cast<int>(static_cast<long long>(n) * f / folds);
    const int hi = static_cast<int>(static_cast<long long>(n) * (f + 1) / folds);
    out[static_cast<std::size_t>(f)].assign(idx.begin() + lo, idx.begin() + hi);
  }
  return out;
}

inline Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
  return out;
}

inline Vector select_entries(const Eigen::Ref<const Vector>& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out(static_cast<Eigen::Index>(c)) = v(idx[c]);
  return out;
}

}  // namespace detail

/// Weighted-L1 regression with weights 1/|b_ols|^gamma from a pilot OLS fit;
/// (lambda, gamma) selected by k-fold cross-validated prediction error.
/// Regressors whose pilot coefficient is exactly zero carry an infinite
/// penalty in the limit and are excluded up front. Returns the penalized
/// coefficients, or an OLS refit on the selected support when cfg.refit.
inline Vector adaptive_lasso(const Eigen::Ref<const Vector>& y, const Matrix& x_rows,
                             const LassoConfig& cfg) {
  cfg.validate();
  const auto k = x_rows.rows();
  if (k == 0) return Vector(0);
  const int n = static_cast<int>(y.size());
  if (cfg.folds > n) throw ValidationError("more folds than samples");

  const Vector pilot = multi_regress(y, x_rows);
  std::vector<int> live;
  for (Eigen::Index j = 0; j < k; ++j)
    if (pilot(j) != 0.0) live.push_back(static_cast<int>(j));
  if (live.empty()) return Vector::Zero(k);

  Matrix x_live(static_cast<Eigen::Index>(live.size()), x_rows.cols());
  Vector pilot_live(static_cast<Eigen::Index>(live.size()));
  for (std::size_t j = 0; j < live.size(); ++j) {
    x_live.row(static_cast<Eigen::Index>(j)) = x_rows.row(live[j]);
    pilot_live(static_cast<Eigen::Index>(j)) = pilot(live[j]);
  }

  const auto folds = detail::cv_folds(n, cfg.folds, cfg.cv_seed);
  std::vector<std::vector<int>> train_sets(folds.size());
  {
    std::vector<bool> in_fold(static_cast<std::size_t>(n));
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::fill(in_fold.begin(), in_fold.end(), false);
      for (int s : folds[f]) in_fold[static_cast<std::size_t>(s)] = true;
      for (int s = 0; s < n; ++s)
        if (!in_fold[static_cast<std::size_t>(s)]) train_sets[f].push_back(s);
    }
  }

  // Mean and standard error of the held-out prediction error for every
  // (gamma, lambda) pair, fitted as one warm-started descending path per fold.
  struct PathScores {
    double gamma = 0.0;
    std::vector<double> lambdas;
    std::vector<double> mean;
    std::vector<double> se;
  };
  std::vector<PathScores> scores;
  for (double gamma : cfg.gamma_grid) {
    const Vector weights = pilot_live.array().abs().pow(-gamma);
    PathScores path;
    path.gamma = gamma;
    path.lambdas =
        cfg.lambda_grid.empty()
            ? detail::auto_lambda_grid(lasso_lambda_max(y, x_live, weights), cfg)
            : cfg.lambda_grid;
    if (path.lambdas.empty()) continue;

    Matrix fold_err(static_cast<Eigen::Index>(path.lambdas.size()),
                    static_cast<Eigen::Index>(folds.size()));
    for (std::size_t f = 0; f < folds.size(); ++f) {
      if (folds[f].empty()) continue;
      const Matrix x_train = detail::select_columns(x_live, train_sets[f]);
      const Vector y_train = detail::select_entries(y, train_sets[f]);
      const Matrix x_test = detail::select_columns(x_live, folds[f]);
      const Vector y_test = detail::select_entries(y, folds[f]);
      Vector warm = Vector::Zero(x_live.rows());
      for (std::size_t g = 0; g < path.lambdas.size(); ++g) {
        warm = lasso_coordinate_descent(y_train, x_train, weights, path.lambdas[g],
                                        cfg, &warm);
        fold_err(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) =
            (y_test - x_test.transpose() * warm).squaredNorm() /
            static_cast<double>(folds[f].size());
      }
    }
    const auto nf = static_cast<double>(folds.size());
    for (std::size_t g = 0; g < path.lambdas.size(); ++g) {
      const auto row = fold_err.row(static_cast<Eigen::Index>(g));
      const double m = row.mean();
      path.mean.push_back(m);
      path.se.push_back(std::sqrt((row.array() - m).square().sum() / (nf - 1.0)) /
                        std::sqrt(nf));
    }
    scores.push_back(std::move(path));
  }
  if (scores.empty()) return Vector::Zero(k);

  // Standard-error rule: among every pair whose mean error is within
  // cv_se_fraction SEs of the smallest, prefer the strongest shrinkage (the
  // earliest grid position, lambda grids being descending).
  double min_mean = std::numeric_limits<double>::infinity();
  double min_se = 0.0;
  for (const auto& path : scores)
    for (std::size_t g = 0; g < path.mean.size(); ++g)
      if (path.mean[g] < min_mean) {
        min_mean = path.mean[g];
        min_se = path.se[g];
      }
  const double cutoff = min_mean + cfg.cv_se_fraction * min_se;
  std::size_t best_path = 0, best_idx = scores[0].lambdas.size() - 1;
  bool found = false;
  for (std::size_t g = 0;; ++g) {
    bool any_left = false;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      if (g >= scores[s].mean.size()) continue;
      any_left = true;
      if (scores[s].mean[g] <= cutoff) {
        best_path = s;
        best_idx = g;
        found = true;
        break;
      }
    }
    if (found || !any_left) break;
  }
  const double best_gamma = scores[best_path].gamma;
  const std::vector<double>& grid = scores[best_path].lambdas;

  // Final full-data fit: walk the path down to the selected lambda, then keep
  // descending while the active set stays put. The returned coefficients are
  // the least-shrunk penalized fit with the selected support, which removes
  // most of the selection-level shrinkage bias without changing the model.
  const Vector weights = pilot_live.array().abs().pow(-best_gamma);
  const auto support_of = [](const Vector& v) {
    std::vector<bool> s(static_cast<std::size_t>(v.size()));
    for (Eigen::Index j = 0; j < v.size(); ++j) s[static_cast<std::size_t>(j)] = v(j) != 0.0;
    return s;
  };
  Vector warm = Vector::Zero(x_live.rows());
  Vector fit_live;
  std::vector<bool> selected_support;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    warm = lasso_coordinate_descent(y, x_live, weights, grid[g], cfg, &warm);
    if (g < best_idx) continue;
    if (g == best_idx) {
      fit_live = warm;
      selected_support = support_of(warm);
      continue;
    }
    if (support_of(warm) != selected_support) break;
    fit_live = warm;
  }

  if (cfg.refit) {
    std::vector<int> support;
    for (Eigen::Index j = 0; j < fit_live.size(); ++j)
      if (fit_live(j) != 0.0) support.push_back(static_cast<int>(j));
    Vector refit = Vector::Zero(fit_live.size());
    if (!support.empty()) {
      Matrix x_sup(static_cast<Eigen::Index>(support.size()), x_live.cols());
      for (std::size_t j = 0; j < support.size(); ++j)
        x_sup.row(static_cast<Eigen::Index>(j)) = x_live.row(support[j]);
      const Vector ols = multi_regress(y, x_sup);
      for (std::size_t j = 0; j < support.size(); ++j) refit(support[j]) = ols(static_cast<Eigen::Index>(j));
    }
    fit_live = refit;
  }

  Vector out = Vector::Zero(k);
  for (std::size_t j = 0; j < live.size(); ++j) out(live[j]) = fit_live(static_cast<Eigen::Index>(j));
  return out;
}

/// Outcome of pruning: the sparsified matrix plus any per-variable failures
/// (those rows keep their unpruned coefficients).
struct PruneResult {
  AdjacencyMatrix pruned;
  std::vector<std::pair<int, std::string>> failures;
};

/// Re-estimates each variable's row over its ordering predecessors with the
/// adaptive lasso. Strict triangularity is preserved; failures are collected
/// per variable while the remaining rows are still pruned.
inline PruneResult prune_adjacency(const Dataset& d, const AdjacencyMatrix& adj,
                                   const LassoConfig& cfg, int threads = 1) {
  cfg.validate();
  validate_ordering(adj.ordering, d.p());
  Matrix centered = d.values();
  centered.colwise() -= centered.rowwise().mean();

  PruneResult result;
  result.pruned.b = adj.b;
  result.pruned.ordering = adj.ordering;
  const auto& k = adj.ordering;
  std::vector<std::pair<int, std::string>> failures(k.size());
  std::vector<bool> failed(k.size(), false);

  parallel_for(static_cast<int>(k.size()) - 1, threads, [&](int task) {
    const std::size_t pos = static_cast<std::size_t>(task) + 1;
    const int i = k[pos];
    Matrix preds(static_cast<Eigen::Index>(pos), d.n());
    for (std::size_t q = 0; q < pos; ++q)
      preds.row(static_cast<Eigen::Index>(q)) = centered.row(k[q]);
    try {
      const Vector coef = adaptive_lasso(centered.row(i).transpose(), preds, cfg);
      for (std::size_t q = 0; q < pos; ++q)
        result.pruned.b(i, k[q]) = coef(static_cast<Eigen::Index>(q));
    } catch (const std::exception& e) {
      failures[pos] = {i, e.what()};
      failed[pos] = true;
    }
  });
  for (std::size_t pos = 1; pos < k.size(); ++pos)
    if (failed[pos]) result.failures.push_back(failures[pos]);
  return result;
}

}  // namespace dlingam
