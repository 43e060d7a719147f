#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/direct_lingam.hpp"

namespace dlingam {

/// Percentile confidence intervals for direct effects b(i, j) and total
/// effects a(i, j). Entries are aligned by original variable labels across
/// replicates; when a replicate's ordering places j after i, its b(i, j) is
/// zero by construction.
struct BootstrapResult {
  int reps = 0;
  int dropped = 0;
  double level = 0.95;
  std::vector<std::string> labels;
  Matrix b_lower, b_upper;
  Matrix a_lower, a_upper;
  Eigen::MatrixXi b_significant, a_significant;  // interval strictly excludes 0
};

/// Resamples the data with replacement and reruns the full pipeline
/// (ordering search, coefficient estimation, total effects) per replicate.
/// Failed replicates are dropped; more than 10% failures aborts. Replicate
/// generators derive from (seed, replicate), so results are independent of
/// thread scheduling.
inline BootstrapResult bootstrap(const Dataset& d, int reps, double level,
                                 const KernelParams& params, std::uint64_t seed,
                                 int threads = 1) {
  if (reps < 100) throw ValidationError("need at least 100 bootstrap replicates");
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("confidence level must be in (0, 1)");
  params.validate();
  const int p = d.p();
  const int n = d.n();

  std::vector<Matrix> b_reps(static_cast<std::size_t>(reps));
  std::vector<Matrix> a_reps(static_cast<std::size_t>(reps));
  std::vector<char> ok(static_cast<std::size_t>(reps), 0);

  parallel_for(reps, threads, [&](int rep) {
    std::mt19937_64 rng(derive_seed(seed, 0xb00157ULL, static_cast<std::uint64_t>(rep)));
    std::uniform_int_distribution<int> pick(0, n - 1);
    Matrix resampled(p, n);
    for (int s = 0; s < n; ++s) resampled.col(s) = d.values().col(pick(rng));
    try {
      const Dataset boot(std::move(resampled), d.labels());
      const CausalOrdering order = discover_order(boot, params);
      const AdjacencyMatrix est = estimate_b(boot, order);
      a_reps[static_cast<std::size_t>(rep)] = total_effects(est).a;
      b_reps[static_cast<std::size_t>(rep)] = est.b;
      ok[static_cast<std::size_t>(rep)] = 1;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(rep)] = 0;
    }
  });

  BootstrapResult result;
  result.reps = reps;
  result.level = level;
  result.labels = d.labels();
  for (char o : ok)
    if (!o) ++result.dropped;
  if (result.dropped * 10 > reps)
    throw NumericError(std::to_string(result.dropped) + " of " + std::to_string(reps) +
                       " bootstrap replicates failed");

  result.b_lower.resize(p, p);
  result.b_upper.resize(p, p);
  result.a_lower.resize(p, p);
  result.a_upper.resize(p, p);
  result.b_significant.resize(p, p);
  result.a_significant.resize(p, p);
  const double alpha = 1.0 - level;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(reps));
  const auto fill = [&](const std::vector<Matrix>& slabs, Matrix& lower, Matrix& upper,
                        Eigen::MatrixXi& significant) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        values.clear();
        for (int rep = 0; rep < reps; ++rep)
          if (ok[static_cast<std::size_t>(rep)])
            values.push_back(slabs[static_cast<std::size_t>(rep)](i, j));
        lower(i, j) = quantile(values, alpha / 2.0);
        upper(i, j) = quantile(values, 1.0 - alpha / 2.0);
        significant(i, j) = (lower(i, j) > 0.0 || upper(i, j) < 0.0) ? 1 : 0;
      }
  };
  fill(b_reps, result.b_lower, result.b_upper, result.b_significant);
  fill(a_reps, result.a_lower, result.a_upper, result.a_significant);
  return result;
}

/// One significant direct effect source -> target with its interval.
struct SignificantEdge {
  int source = 0;
  int target = 0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Direct effects whose interval strictly excludes zero, in deterministic
/// (target, source) scan order.
inline std::vector<SignificantEdge> significant_edges(const BootstrapResult& r) {
  std::vector<SignificantEdge> edges;
  for (Eigen::Index i = 0; i < r.b_significant.rows(); ++i)
    for (Eigen::Index j = 0; j < r.b_significant.cols(); ++j)
      if (i != j && r.b_significant(i, j))
        edges.push_back({static_cast<int>(j), static_cast<int>(i), r.b_lower(i, j),
                         r.b_upper(i, j)});
  return edges;
}

}  // namespace dlingam
