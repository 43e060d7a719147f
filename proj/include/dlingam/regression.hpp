#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/dataset.hpp"

namespace dlingam {

/// Causal ordering K: a permutation of {0..p-1}; position encodes rank.
using CausalOrdering = std::vector<int>;

inline void validate_ordering(const CausalOrdering& k, int p) {
  if (static_cast<int>(k.size()) != p)
    throw ValidationError("ordering length does not match variable count");
  validate_variable_set(k, p);
}

/// Residuals of every active variable regressed on one regressor row.
struct ResidualMatrix {
  Matrix values;          // (|kept|) x n
  int regressor = -1;     // subscript of the regressed-out variable
  VariableSet kept;       // surviving subscripts, relative order preserved
};

namespace detail {

inline double sample_mean(const Eigen::Ref<const Vector>& x) {
  return x.mean();
}

/// Sample variance with the 1/n convention, computed about the mean.
inline double sample_var(const Eigen::Ref<const Vector>& x) {
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size());
}

inline double sample_cov(const Eigen::Ref<const Vector>& x,
                         const Eigen::Ref<const Vector>& y) {
  const double mx = x.mean(), my = y.mean();
  return ((x.array() - mx) * (y.array() - my)).sum() / static_cast<double>(x.size());
}

}  // namespace detail

/// Least-squares residual of xi regressed on xj:
/// r = xi - (cov(xi,xj)/var(xj)) * xj. The result has zero sample covariance
/// with xj regardless of centering.
inline Vector simple_regress_residual(const Eigen::Ref<const Vector>& xi,
                                      const Eigen::Ref<const Vector>& xj) {
  if (xi.size() != xj.size())
    throw ValidationError("regression rows have different lengths");
  const double var_j = detail::sample_var(xj);
  if (var_j == 0.0) throw NumericError("regressor has zero variance");
  const double beta = detail::sample_cov(xi, xj) / var_j;
  return xi - beta * xj;
}

/// One residual row per i in active\{j}, regressed on x_j.
inline ResidualMatrix residual_matrix(const Dataset& d, int j,
                                      const VariableSet& active) {
  validate_variable_set(active, d.p());
  if (std::find(active.begin(), active.end(), j) == active.end())
    throw ValidationError("regressor subscript not in active set");
  ResidualMatrix out;
  out.regressor = j;
  out.values.resize(static_cast<Eigen::Index>(active.size()) - 1, d.n());
  Eigen::Index r = 0;
  for (int i : active) {
    if (i == j) continue;
    out.values.row(r++) = simple_regress_residual(d.row(i), d.row(j)).transpose();
    out.kept.push_back(i);
  }
  return out;
}

/// Ordinary least squares of y on the rows of X via normal equations.
/// The Gram matrix must be well conditioned (< 1e12); a silent pseudo-inverse
/// would distort downstream connection-strength estimates, so ill-conditioned
/// designs raise instead.
inline Vector multi_regress(const Eigen::Ref<const Vector>& y, const Matrix& x_rows) {
  const auto k = x_rows.rows();
  if (k == 0) return Vector(0);
  if (x_rows.cols() != y.size())
    throw ValidationError("regressor rows and response have different lengths");

  const Matrix gram = x_rows * x_rows.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success)
    throw NumericError("eigendecomposition of Gram matrix failed");
  const Vector& ev = eig.eigenvalues();
  const double ev_max = ev(k - 1);
  const double ev_min = ev(0);
  constexpr double kCondLimit = 1e12;
  if (!(ev_min > 0.0) || ev_max / ev_min > kCondLimit) {
    const double cond = ev_min > 0.0 ? ev_max / ev_min
                                     : std::numeric_limits<double>::infinity();
    throw NumericError("regression design is ill-conditioned (condition estimate " +
                       std::to_string(cond) + ")");
  }
  const Vector rhs = x_rows * y;
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * rhs).cwiseQuotient(ev);
}

/// True iff simultaneously permuting rows and columns of b by k yields zeros
/// on and above the diagonal.
inline bool is_strictly_lower_triangular_under(const Matrix& b,
                                               const CausalOrdering& k,
                                               double tol = 0.0) {
  if (b.rows() != b.cols()) throw ValidationError("adjacency matrix must be square");
  validate_ordering(k, static_cast<int>(b.rows()));
  for (std::size_t a = 0; a < k.size(); ++a)
    for (std::size_t c = a; c < k.size(); ++c)
      if (std::abs(b(k[a], k[c])) > tol) return false;
  return true;
}

}  // namespace dlingam
