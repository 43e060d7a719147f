#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlingam/simulation.hpp"

namespace dlingam {

struct BenchmarkGrid {
  std::vector<int> dims;
  std::vector<int> sizes;
  Density density = Density::sparse;
  int target_adjacent = 2;
};

struct BenchmarkCell {
  int p = 0;
  int n = 0;
  int reps = 0;
  int failures = 0;
  double median_distance = 0.0;
  double median_fit_seconds = 0.0;
  std::optional<double> prior_median_distance;
  std::optional<double> prior_median_fit_seconds;
};

struct BenchmarkReport {
  std::string density_name;
  std::uint64_t seed = 0;
  std::vector<BenchmarkCell> cells;

  std::string to_csv() const {
    const bool prior = !cells.empty() && cells.front().prior_median_distance.has_value();
    std::string out = "p,n,density,reps,failures,median_distance,median_fit_seconds";
    if (prior) out += ",prior_median_distance,prior_median_fit_seconds";
    out += "\n";
    char buf[256];
    for (const auto& c : cells) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%s,%d,%d,%.6g,%.6g", c.p, c.n,
                    density_name.c_str(), c.reps, c.failures, c.median_distance,
                    c.median_fit_seconds);
      out += buf;
      if (prior) {
        std::snprintf(buf, sizeof(buf), ",%.6g,%.6g",
                      c.prior_median_distance.value_or(0.0),
                      c.prior_median_fit_seconds.value_or(0.0));
        out += buf;
      }
      out += "\n";
    }
    return out;
  }

  std::string to_text_table() const {
    const bool prior = !cells.empty() && cells.front().prior_median_distance.has_value();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-6s %-7s %-9s %-14s %-12s", "p", "n", "density",
                  "median_dist", "median_sec");
    std::string out = buf;
    if (prior) {
      std::snprintf(buf, sizeof(buf), " %-14s %-12s", "prior_dist", "prior_sec");
      out += buf;
    }
    out += "\n";
    for (const auto& c : cells) {
      std::snprintf(buf, sizeof(buf), "%-6d %-7d %-9s %-14.4f %-12.3f", c.p, c.n,
                    density_name.c_str(), c.median_distance, c.median_fit_seconds);
      out += buf;
      if (prior) {
        std::snprintf(buf, sizeof(buf), " %-14.4f %-12.3f",
                      c.prior_median_distance.value_or(0.0),
                      c.prior_median_fit_seconds.value_or(0.0));
        out += buf;
      }
      if (c.failures > 0) {
        std::snprintf(buf, sizeof(buf), "  [%d failed]", c.failures);
        out += buf;
      }
      out += "\n";
    }
    return out;
  }
};

inline std::string density_name(Density d, int target_adjacent) {
  return d == Density::dense_full ? "dense"
                                  : "sparse" + std::to_string(target_adjacent);
}

/// Runs the synthetic benchmark over every (p, n) cell: per repetition, draw
/// an instance, time the ordering search plus coefficient estimation, and
/// score the Frobenius distance to the truth. With prior_hide set, a second
/// arm repeats the fit on the same instance with a partially hidden
/// path-indicator prior. Per-repetition generators are derived from
/// (master_seed, cell, rep) so parallel execution is reproducible.
inline BenchmarkReport run_benchmark(
    const BenchmarkGrid& grid, int reps, std::optional<double> prior_hide,
    std::uint64_t master_seed, int threads = 1,
    const std::function<KernelParams(int)>& params_for = {}) {
  if (grid.dims.empty() || grid.sizes.empty())
    throw ValidationError("benchmark grid is empty");
  if (reps < 1) throw ValidationError("need at least one repetition");

  const auto params_of = [&](int n) {
    return params_for ? params_for(n) : default_params(n);
  };

  struct RepOutcome {
    bool ok = false;
    double distance = 0.0;
    double seconds = 0.0;
    double prior_distance = 0.0;
    double prior_seconds = 0.0;
  };

  BenchmarkReport report;
  report.density_name = density_name(grid.density, grid.target_adjacent);
  report.seed = master_seed;

  int cell_index = 0;
  for (int p : grid.dims)
    for (int n : grid.sizes) {
      std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));
      parallel_for(reps, threads, [&](int rep) {
        auto& out = outcomes[static_cast<std::size_t>(rep)];
        try {
          DagSpec spec;
          spec.p = p;
          spec.density = grid.density;
          spec.target_adjacent = grid.target_adjacent;
          spec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(cell_index),
                                  static_cast<std::uint64_t>(rep));
          std::mt19937_64 rng(spec.seed);
          const BenchmarkInstance inst = generate_instance(spec, n, rng);
          const KernelParams params = params_of(n);

          const auto t0 = std::chrono::steady_clock::now();
          const CausalOrdering order = discover_order(inst.data, params);
          const AdjacencyMatrix est = estimate_b(inst.data, order);
          out.seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
          out.distance = frobenius_distance(inst.true_b.b, est.b);

          if (prior_hide) {
            std::mt19937_64 prior_rng(
                derive_seed(spec.seed, 0x70726929ULL));
            const PriorKnowledge prior =
                mask_prior(inst.true_b, *prior_hide, prior_rng);
            const auto t1 = std::chrono::steady_clock::now();
            const CausalOrdering prior_order =
                discover_order(inst.data, params, &prior);
            const AdjacencyMatrix prior_est = estimate_b(inst.data, prior_order);
            out.prior_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t1)
                                    .count();
            out.prior_distance = frobenius_distance(inst.true_b.b, prior_est.b);
          }
          out.ok = true;
        } catch (const std::exception&) {
          out.ok = false;
        }
      });

      BenchmarkCell cell;
      cell.p = p;
      cell.n = n;
      cell.reps = reps;
      std::vector<double> dist, secs, pdist, psecs;
      for (const auto& o : outcomes) {
        if (!o.ok) {
          ++cell.failures;
          continue;
        }
        dist.push_back(o.distance);
        secs.push_back(o.seconds);
        if (prior_hide) {
          pdist.push_back(o.prior_distance);
          psecs.push_back(o.prior_seconds);
        }
      }
      if (!dist.empty()) {
        cell.median_distance = median(dist);
        cell.median_fit_seconds = median(secs);
        if (prior_hide) {
          cell.prior_median_distance = median(pdist);
          cell.prior_median_fit_seconds = median(psecs);
        }
      }
      report.cells.push_back(cell);
      ++cell_index;
    }
  return report;
}

}  // namespace dlingam
