#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dlingam/regression.hpp"

namespace dlingam {

/// Parameters of the Gaussian-kernel mutual-information estimator.
/// center_gram and standardize_inputs are estimator-construction choices kept
/// toggleable for A/B validation; defaults follow the shipped estimator.
struct KernelParams {
  double sigma = 1.0;       // Gaussian bandwidth, in sample units
  double kappa = 2e-2;      // regularization constant
  int max_rank = 60;        // cap on the low-rank factor size M
  double pivot_tol = 1e-6;  // stop when residual trace <= pivot_tol * n
  bool center_gram = true;
  bool standardize_inputs = true;

  void validate() const {
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
    if (max_rank < 1) throw ValidationError("max_rank must be >= 1");
    if (!(pivot_tol > 0.0)) throw ValidationError("pivot_tol must be positive");
  }
};

/// Sample-size-dependent defaults: (kappa, sigma) = (2e-3, 1/2) for n > 1000,
/// (2e-2, 1) for n <= 1000.
inline KernelParams default_params(int n) {
  if (n < 3) throw ValidationError("need at least 3 samples");
  KernelParams p;
  if (n > 1000) {
    p.kappa = 2e-3;
    p.sigma = 0.5;
  } else {
    p.kappa = 2e-2;
    p.sigma = 1.0;
  }
  p.max_rank = std::min(n, 60);
  return p;
}

/// Low-rank Gram approximation K ~ G G^T from greedy pivoted Cholesky.
struct LowRankGram {
  Matrix factor;               // n x M
  std::vector<int> pivots;     // chosen sample indices, in pick order
  double residual_trace = 0.0; // remaining diagonal mass at stop
};

/// Greedy largest-diagonal-pivot incomplete Cholesky of the Gaussian Gram
/// matrix of y, without ever forming the n x n matrix. Stops when the
/// residual trace drops to pivot_tol * n or the rank cap is hit.
inline LowRankGram incomplete_cholesky(const Eigen::Ref<const Vector>& y,
                                       const KernelParams& params) {
  params.validate();
  const auto n = y.size();
  if (n < 1) throw ValidationError("empty sample row");
  const double inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);
  const int cap = std::min<int>(params.max_rank, static_cast<int>(n));
  const double stop = params.pivot_tol * static_cast<double>(n);

  Vector diag = Vector::Ones(n);  // k(y_i, y_i) = 1
  Matrix g(n, cap);
  std::vector<int> pivots;
  double trace = static_cast<double>(n);
  int m = 0;
  while (m < cap && trace > stop) {
    Eigen::Index pivot;
    const double best = diag.maxCoeff(&pivot);
    if (best <= 1e-15) break;  // numerically exhausted
    Vector col = (-(y.array() - y(pivot)).square() * inv_two_sigma_sq).exp();
    if (m > 0)
      col.noalias() -= g.leftCols(m) * g.row(pivot).head(m).transpose();
    col /= std::sqrt(best);
    g.col(m) = col;
    diag -= col.cwiseAbs2();
    diag = diag.cwiseMax(0.0);
    diag(pivot) = 0.0;
    trace = diag.sum();
    pivots.push_back(static_cast<int>(pivot));
    ++m;
  }
  return LowRankGram{g.leftCols(m), std::move(pivots), trace};
}

namespace detail {

inline Vector standardized_copy(const Eigen::Ref<const Vector>& y) {
  Vector v = y.array() - y.mean();
  const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
  if (sd > 0.0) v /= sd;  // constant rows stay as-is; their Gram is rank one
  return v;
}

}  // namespace detail

/// Spectral form of one variable's regularized kernel operator
/// K (K + n*kappa/2 I)^-1, restricted to the numerical range of the low-rank
/// factor: basis columns in `basis`, eigenvalue gains in `gain`.
struct KernelFactor {
  Matrix basis;  // n x r, orthonormal columns
  Vector gain;   // r entries lambda^2 / (lambda^2 + n*kappa/2)
};

/// Factorizes one sample row for repeated pairwise MI evaluation.
inline KernelFactor kernel_factor(const Eigen::Ref<const Vector>& y,
                                  const KernelParams& params) {
  const Vector v =
      params.standardize_inputs ? detail::standardized_copy(y) : Vector(y);
  LowRankGram low = incomplete_cholesky(v, params);
  Matrix g = std::move(low.factor);
  const auto n = v.size();
  if (params.center_gram && g.cols() > 0)
    g.rowwise() -= g.colwise().mean();  // G <- H G, so G G^T = H K H

  const auto m = g.cols();
  if (m == 0) return KernelFactor{Matrix(n, 0), Vector(0)};

  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix r_upper =
      qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(r_upper, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * 1e-12 : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  Matrix thin_q = qr.householderQ() * Matrix::Identity(n, m);
  KernelFactor f;
  f.basis.noalias() = thin_q * svd.matrixU().leftCols(rank);
  f.gain.resize(rank);
  const double ridge = static_cast<double>(n) * params.kappa / 2.0;
  for (Eigen::Index i = 0; i < rank; ++i) {
    const double ev = sv(i) * sv(i);  // eigenvalue of G G^T
    f.gain(i) = ev / (ev + ridge);
  }
  return f;
}

/// MI from two precomputed factors: -1/2 sum log(1 - s_i^2) over the singular
/// values s_i of gain1 * basis1^T basis2 * gain2. Every term is nonnegative
/// by construction.
inline double kgv_mi_from_factors(const KernelFactor& f1, const KernelFactor& f2) {
  if (f1.gain.size() == 0 || f2.gain.size() == 0) return 0.0;
  Matrix cross = f1.basis.transpose() * f2.basis;
  cross = f1.gain.asDiagonal() * cross * f2.gain.asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(cross);
  double mi = 0.0;
  for (double s : svd.singularValues()) {
    const double one_minus = 1.0 - s * s;
    if (!(one_minus > 0.0))
      throw NumericError("degenerate Gram matrix: determinant ratio is not finite");
    mi -= 0.5 * std::log1p(-s * s);
  }
  return mi;
}

/// Kernel-based mutual-information estimate between two sample rows,
/// computed through low-rank factors of the (centered) Gram matrices.
inline double kgv_mi(const Eigen::Ref<const Vector>& y1,
                     const Eigen::Ref<const Vector>& y2,
                     const KernelParams& params) {
  if (y1.size() != y2.size()) throw ValidationError("rows have different lengths");
  if (y1.size() < 3) throw ValidationError("need at least 3 samples");
  return kgv_mi_from_factors(kernel_factor(y1, params), kernel_factor(y2, params));
}

/// Dense-determinant evaluation of the same estimator:
/// -1/2 log(det Kk / det Dk) with the full 2n x 2n block matrices. O(n^3);
/// intended as a cross-check for moderate n.
inline double kgv_mi_dense(const Eigen::Ref<const Vector>& y1,
                           const Eigen::Ref<const Vector>& y2,
                           const KernelParams& params) {
  params.validate();
  if (y1.size() != y2.size()) throw ValidationError("rows have different lengths");
  const auto n = y1.size();
  if (n < 3) throw ValidationError("need at least 3 samples");

  const auto gram = [&](const Eigen::Ref<const Vector>& raw) {
    const Vector v =
        params.standardize_inputs ? detail::standardized_copy(raw) : Vector(raw);
    Matrix k(n, n);
    const double inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double d = v(i) - v(j);
        k(i, j) = std::exp(-d * d * inv_two_sigma_sq);
      }
    if (params.center_gram) {
      const Vector row_mean = k.rowwise().mean();
      const double total = row_mean.mean();
      k.colwise() -= row_mean;
      k.rowwise() -= row_mean.transpose();
      k.array() += total;
    }
    return k;
  };

  const Matrix k1 = gram(y1);
  const Matrix k2 = gram(y2);
  const double ridge = static_cast<double>(n) * params.kappa / 2.0;
  const Matrix a = k1 + ridge * Matrix::Identity(n, n);
  const Matrix b = k2 + ridge * Matrix::Identity(n, n);

  Matrix numerator(2 * n, 2 * n);
  numerator.topLeftCorner(n, n) = a * a;
  numerator.topRightCorner(n, n) = k1 * k2;
  numerator.bottomLeftCorner(n, n) = k2 * k1;
  numerator.bottomRightCorner(n, n) = b * b;

  const auto log_det_spd = [](const Matrix& m) {
    Eigen::LDLT<Matrix> ldlt(m);
    if (ldlt.info() != Eigen::Success)
      throw NumericError("determinant factorization failed");
    double out = 0.0;
    for (double d : ldlt.vectorD()) {
      if (!(d > 0.0))
        throw NumericError("degenerate Gram matrix: determinant ratio is not finite");
      out += std::log(d);
    }
    return out;
  };
  const double log_num = log_det_spd(numerator);
  const double log_den = 2.0 * (log_det_spd(a) + log_det_spd(b));
  return -0.5 * (log_num - log_den);
}

/// Aggregate independence statistic between x_j and its regression residuals:
/// T(x_j; active) = sum over i in active\{j} of MI(x_j, r_i^(j)).
inline double t_kernel(const Dataset& d, int j, const VariableSet& active,
                       const KernelParams& params) {
  if (active.size() < 2) throw ValidationError("need at least 2 active variables");
  const ResidualMatrix res = residual_matrix(d, j, active);
  const KernelFactor fj = kernel_factor(d.row(j), params);
  double total = 0.0;
  for (Eigen::Index r = 0; r < res.values.rows(); ++r)
    total += kgv_mi_from_factors(
        fj, kernel_factor(res.values.row(r).transpose(), params));
  return total;
}

}  // namespace dlingam
