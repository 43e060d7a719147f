#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/direct_lingam.hpp"

namespace dlingam {

enum class Density { sparse, dense_full };

/// Generator recipe for one synthetic model: size, sparsity, and the fixed
/// coefficient / external-variance ranges.
struct DagSpec {
  int p = 10;
  Density density = Density::sparse;
  int target_adjacent = 2;     // expected adjacent variables per node (sparse)
  double coeff_min = 0.5;      // |b| drawn uniformly from [coeff_min, coeff_max]
  double coeff_max = 1.5;
  double var_min = 1.0;        // external-influence variances
  double var_max = 3.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (p < 2) throw ValidationError("need at least 2 variables");
    if (density == Density::sparse && (target_adjacent < 1 || target_adjacent >= p))
      throw ValidationError("target adjacency must be in [1, p)");
    if (!(coeff_min > 0.0 && coeff_max >= coeff_min))
      throw ValidationError("invalid coefficient interval");
    if (!(var_min > 0.0 && var_max >= var_min))
      throw ValidationError("invalid variance interval");
  }
};

/// The 18 non-Gaussian external-influence distributions, identified by the
/// letters (a)-(r): Student t3, Laplace, uniform, Student t5, exponential, a
/// two-Laplace mixture, and twelve Gaussian mixtures (two- and four-component,
/// symmetric and nonsymmetric, multimodal / transitional / unimodal). Every
/// sampler is normalized analytically to zero mean and unit variance.
enum class DistributionId : int {
  student_t3 = 0,        // a
  double_exponential,    // b
  uniform,               // c
  student_t5,            // d
  exponential,           // e
  mix2_laplace,          // f
  mix2_sym_multi,        // g
  mix2_sym_trans,        // h
  mix2_sym_uni,          // i
  mix2_asym_multi,       // j
  mix2_asym_trans,       // k
  mix2_asym_uni,         // l
  mix4_sym_multi,        // m
  mix4_sym_trans,        // n
  mix4_sym_uni,          // o
  mix4_asym_multi,       // p
  mix4_asym_trans,       // q
  mix4_asym_uni,         // r
};

constexpr int kDistributionCount = 18;

inline char distribution_letter(DistributionId id) {
  return static_cast<char>('a' + static_cast<int>(id));
}

inline DistributionId distribution_from_letter(char c) {
  if (c < 'a' || c >= 'a' + kDistributionCount)
    throw ValidationError(std::string("unknown distribution id '") + c + "'");
  return static_cast<DistributionId>(c - 'a');
}

namespace detail {

struct MixtureComponent {
  double weight;
  double mean;
  double scale;        // sd for Gaussian components, b for Laplace
  bool laplace = false;
};

/// Mean/variance of the raw mixture, computed analytically so every sampler
/// can be shifted and scaled to exactly zero mean and unit variance.
inline std::pair<double, double> mixture_moments(
    const std::vector<MixtureComponent>& comps) {
  double mean = 0.0, second = 0.0;
  for (const auto& c : comps) {
    const double v = c.laplace ? 2.0 * c.scale * c.scale : c.scale * c.scale;
    mean += c.weight * c.mean;
    second += c.weight * (v + c.mean * c.mean);
  }
  return {mean, second - mean * mean};
}

inline double sample_laplace(double b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const double x = u(rng);
  return -b * (x < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(x));
}

inline const std::vector<MixtureComponent>& mixture_table(DistributionId id) {
  // Component tables for ids (f)-(r). Separation of the component means
  // relative to their spread realizes the multimodal / transitional /
  // unimodal shapes; unequal weights and means give the nonsymmetric ones.
  static const std::array<std::vector<MixtureComponent>, 13> tables = {{
      // f: two double exponentials at +-1
      {{0.5, -1.0, 0.5, true}, {0.5, 1.0, 0.5, true}},
      // g-i: symmetric two-Gaussian
      {{0.5, -1.0, 1.0 / 3.0}, {0.5, 1.0, 1.0 / 3.0}},
      {{0.5, -1.0, 1.0}, {0.5, 1.0, 1.0}},
      {{0.5, -0.5, 1.0}, {0.5, 0.5, 1.0}},
      // j-l: nonsymmetric two-Gaussian
      {{0.7, -0.8, 0.23}, {0.3, 1.1, 0.35}},
      {{0.7, -0.5, 0.6}, {0.3, 1.2, 0.7}},
      {{0.7, -0.3, 0.9}, {0.3, 0.7, 1.0}},
      // m-o: symmetric four-Gaussian
      {{0.25, -1.2, 0.12}, {0.25, -0.4, 0.12}, {0.25, 0.4, 0.12}, {0.25, 1.2, 0.12}},
      {{0.25, -1.2, 0.35}, {0.25, -0.4, 0.35}, {0.25, 0.4, 0.35}, {0.25, 1.2, 0.35}},
      {{0.25, -1.2, 0.7}, {0.25, -0.4, 0.7}, {0.25, 0.4, 0.7}, {0.25, 1.2, 0.7}},
      // p-r: nonsymmetric four-Gaussian
      {{0.1, -1.5, 0.12}, {0.4, -0.4, 0.15}, {0.3, 0.5, 0.15}, {0.2, 1.3, 0.12}},
      {{0.1, -1.5, 0.35}, {0.4, -0.4, 0.35}, {0.3, 0.5, 0.35}, {0.2, 1.3, 0.35}},
      {{0.1, -1.5, 0.8}, {0.4, -0.4, 0.8}, {0.3, 0.5, 0.8}, {0.2, 1.3, 0.8}},
  }};
  return tables[static_cast<std::size_t>(id) - static_cast<std::size_t>(DistributionId::mix2_laplace)];
}

inline double sample_unit(DistributionId id, std::mt19937_64& rng) {
  switch (id) {
    case DistributionId::student_t3: {
      std::student_t_distribution<double> t(3.0);
      return t(rng) / std::sqrt(3.0);  // var of t3 is 3
    }
    case DistributionId::double_exponential:
      return sample_laplace(1.0 / std::sqrt(2.0), rng);
    case DistributionId::uniform: {
      std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
      return u(rng);
    }
    case DistributionId::student_t5: {
      std::student_t_distribution<double> t(5.0);
      return t(rng) * std::sqrt(3.0 / 5.0);  // var of t5 is 5/3
    }
    case DistributionId::exponential: {
      std::exponential_distribution<double> e(1.0);
      return e(rng) - 1.0;
    }
    default: {
      const auto& comps = mixture_table(id);
      const auto [mean, var] = mixture_moments(comps);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double pick = u(rng);
      const MixtureComponent* chosen = &comps.back();
      for (const auto& c : comps) {
        if (pick < c.weight) {
          chosen = &c;
          break;
        }
        pick -= c.weight;
      }
      double x;
      if (chosen->laplace) {
        x = chosen->mean + sample_laplace(chosen->scale, rng);
      } else {
        std::normal_distribution<double> g(chosen->mean, chosen->scale);
        x = g(rng);
      }
      return (x - mean) / std::sqrt(var);
    }
  }
}

}  // namespace detail

/// n draws with population mean zero and the requested variance.
inline Vector sample_external(DistributionId id, int n, double variance,
                              std::mt19937_64& rng) {
  if (n < 1) throw ValidationError("need at least one sample");
  if (!(variance > 0.0)) throw ValidationError("variance must be positive");
  const double scale = std::sqrt(variance);
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = scale * detail::sample_unit(id, rng);
  return out;
}

/// Strictly lower triangular coefficient matrix. Sparse mode keeps each
/// lower-triangular entry with probability s = target_adjacent / (p - 1);
/// dense mode fills every entry. Nonzero magnitudes are uniform on
/// [coeff_min, coeff_max] with random sign.
inline Matrix random_dag(const DagSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  const double s = spec.density == Density::dense_full
                       ? 1.0
                       : static_cast<double>(spec.target_adjacent) /
                             static_cast<double>(spec.p - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(spec.coeff_min, spec.coeff_max);
  Matrix b = Matrix::Zero(spec.p, spec.p);
  for (int i = 1; i < spec.p; ++i)
    for (int j = 0; j < i; ++j) {
      if (spec.density == Density::sparse && unit(rng) >= s) continue;
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      b(i, j) = sign * magnitude(rng);
    }
  return b;
}

/// One synthetic estimation problem: ground truth, generated data (variable
/// order randomly permuted), and the bookkeeping to score against.
struct BenchmarkInstance {
  AdjacencyMatrix true_b;              // in the permuted (observed) labeling
  std::vector<DistributionId> dists;   // per observed variable
  Dataset data;
  std::vector<int> permutation;        // observed row of each generated variable
  std::uint64_t seed = 0;
};

/// Draws a model from spec, simulates n samples by forward substitution in
/// causal order, then randomly permutes the variable order.
inline BenchmarkInstance generate_instance(const DagSpec& spec, int n,
                                           std::mt19937_64& rng) {
  spec.validate();
  if (n < 3) throw ValidationError("need at least 3 samples");
  const int p = spec.p;
  const Matrix b0 = random_dag(spec, rng);

  std::uniform_int_distribution<int> pick_dist(0, kDistributionCount - 1);
  std::uniform_real_distribution<double> pick_var(spec.var_min, spec.var_max);
  std::vector<DistributionId> dists0(static_cast<std::size_t>(p));
  Matrix x(p, n);
  for (int i = 0; i < p; ++i) {
    dists0[static_cast<std::size_t>(i)] = static_cast<DistributionId>(pick_dist(rng));
    x.row(i) = sample_external(dists0[static_cast<std::size_t>(i)], n, pick_var(rng), rng)
                   .transpose();
    for (int j = 0; j < i; ++j)
      if (b0(i, j) != 0.0) x.row(i) += b0(i, j) * x.row(j);
  }

  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  Matrix data(p, n);
  Matrix b_perm = Matrix::Zero(p, p);
  std::vector<DistributionId> dists(static_cast<std::size_t>(p));
  CausalOrdering ordering(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    data.row(perm[static_cast<std::size_t>(i)]) = x.row(i);
    dists[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        dists0[static_cast<std::size_t>(i)];
    ordering[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j)
      b_perm(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) =
          b0(i, j);
  }
  return BenchmarkInstance{AdjacencyMatrix{std::move(b_perm), std::move(ordering)},
                           std::move(dists), Dataset(std::move(data)),
                           std::move(perm), spec.seed};
}

/// Directed-path indicator of a triangularizable matrix: entry (j, i) is 1
/// when x_i has a directed path to x_j through the nonzero pattern of b.
inline Eigen::MatrixXi path_indicator(const Matrix& b) {
  const auto p = b.rows();
  if (b.cols() != p) throw ValidationError("adjacency matrix must be square");
  Eigen::MatrixXi reach(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) reach(i, j) = b(i, j) != 0.0 ? 1 : 0;
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index i = 0; i < p; ++i)
      if (reach(i, k))
        for (Eigen::Index j = 0; j < p; ++j)
          if (reach(k, j)) reach(i, j) = 1;
  reach.diagonal().setZero();
  return reach;
}

/// Exact prior knowledge from the ground truth, then each off-diagonal entry
/// independently hidden (set to -1) with probability hide_prob.
inline PriorKnowledge mask_prior(const AdjacencyMatrix& true_b, double hide_prob,
                                 std::mt19937_64& rng) {
  if (!(hide_prob >= 0.0 && hide_prob <= 1.0))
    throw ValidationError("hide probability must be in [0, 1]");
  if (!is_strictly_lower_triangular_under(true_b.b, true_b.ordering))
    throw ValidationError("true matrix is not strictly triangular under its ordering");
  Eigen::MatrixXi knw = path_indicator(true_b.b);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index j = 0; j < knw.rows(); ++j)
    for (Eigen::Index i = 0; i < knw.cols(); ++i) {
      if (i == j) continue;
      if (unit(rng) < hide_prob) knw(j, i) = -1;
    }
  return PriorKnowledge(std::move(knw));
}

/// sqrt(trace((A - B)^T (A - B))) between two same-shape matrices aligned to
/// the same variable labeling.
inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("matrix shapes differ");
  return (a - b).norm();
}

}  // namespace dlingam
