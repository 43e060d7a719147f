// Command-line front end: causal-structure discovery, synthetic-instance
// generation, benchmarking, and edge pruning with reproducible, manifest-
// driven runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlingam/dlingam.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 0;          // 0 = all hardware threads
  std::string out = "out";
  double sigma = 0.0;       // 0 = sample-size default
  double kappa = 0.0;
  int max_rank = 0;
};

void to_json(json& j, const CommonOpts& c) {
  j = json{{"seed", c.seed},   {"threads", c.threads},   {"out", c.out},
           {"sigma", c.sigma}, {"kappa", c.kappa},       {"max_rank", c.max_rank}};
}

void from_json(const json& j, CommonOpts& c) {
  j.at("seed").get_to(c.seed);
  j.at("threads").get_to(c.threads);
  j.at("out").get_to(c.out);
  j.at("sigma").get_to(c.sigma);
  j.at("kappa").get_to(c.kappa);
  j.at("max_rank").get_to(c.max_rank);
}

dlingam::KernelParams resolve_params(int n, const CommonOpts& c) {
  dlingam::KernelParams p = dlingam::default_params(n);
  if (c.sigma > 0.0) p.sigma = c.sigma;
  if (c.kappa > 0.0) p.kappa = c.kappa;
  if (c.max_rank > 0) p.max_rank = std::min(c.max_rank, n);
  return p;
}

void add_common_flags(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "Master random seed (echoed in the manifest)");
  cmd->add_option("--threads", c.threads, "Worker threads; 0 uses all cores");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--sigma", c.sigma, "Gaussian kernel bandwidth (0 = auto)");
  cmd->add_option("--kappa", c.kappa, "Kernel regularization constant (0 = auto)");
  cmd->add_option("--max-rank", c.max_rank, "Low-rank cap for Gram factors (0 = auto)");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw dlingam::IoError("cannot write '" + path.string() + "'");
  out << content;
}

std::string labeled_matrix_csv(const dlingam::Matrix& m,
                               const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + format_double(m(i, j));
    out += "\n";
  }
  return out;
}

/// Reads a square matrix CSV, with or without the label row/column written
/// by this tool.
dlingam::Matrix read_matrix_csv(const std::string& path,
                                std::vector<std::string>* labels_out = nullptr) {
  std::ifstream in(path);
  if (!in) throw dlingam::IoError("cannot open '" + path + "'");
  std::string line;
  std::vector<std::vector<std::string>> cells;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.push_back("");
    cells.push_back(std::move(row));
  }
  if (cells.empty()) throw dlingam::IoError(path + ": no rows");
  const bool labeled = !cells.front().empty() && cells.front().front().empty();
  const std::size_t r0 = labeled ? 1 : 0;
  const std::size_t c0 = labeled ? 1 : 0;
  const std::size_t rows = cells.size() - r0;
  if (rows == 0) throw dlingam::IoError(path + ": no data rows");
  const std::size_t cols = cells[r0].size() - c0;
  dlingam::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (cells[i + r0].size() - c0 != cols)
      throw dlingam::IoError(path + ": ragged row " + std::to_string(i + r0 + 1));
    for (std::size_t j = 0; j < cols; ++j) {
      try {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::stod(cells[i + r0][j + c0]);
      } catch (const std::exception&) {
        throw dlingam::IoError(path + ": cannot parse numeric value at row " +
                               std::to_string(i + r0 + 1) + ", column " +
                               std::to_string(j + c0 + 1));
      }
    }
  }
  if (labels_out && labeled) {
    labels_out->clear();
    for (std::size_t j = 1; j < cells.front().size(); ++j)
      labels_out->push_back(cells.front()[j]);
  }
  return m;
}

std::string samples_csv(const dlingam::Dataset& d) {
  std::string out;
  for (int i = 0; i < d.p(); ++i) {
    if (i) out += ",";
    out += d.label(i);
  }
  out += "\n";
  for (int s = 0; s < d.n(); ++s) {
    for (int i = 0; i < d.p(); ++i) {
      if (i) out += ",";
      out += format_double(d.values()(i, s));
    }
    out += "\n";
  }
  return out;
}

bool first_line_is_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dlingam::IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw dlingam::IoError(path + ": empty file");
  for (auto cell : dlingam::detail::split_csv_line(line)) {
    double v;
    if (!dlingam::detail::parse_double(cell, v)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// discover

struct DiscoverConfig {
  std::string input;
  std::string prior;
  bool transpose = false;
  int header = -1;  // -1 auto, 0 none, 1 present
  bool standardize_data = false;
  int bootstrap_reps = 0;
  double level = 0.95;
  bool prune = false;
  int lasso_folds = 5;
  std::vector<double> gamma_grid{0.5, 1.0, 2.0};
  bool refit = false;
  CommonOpts common;
};

void to_json(json& j, const DiscoverConfig& c) {
  j = json{{"command", "discover"},
           {"input", c.input},
           {"prior", c.prior},
           {"transpose", c.transpose},
           {"header", c.header},
           {"standardize", c.standardize_data},
           {"bootstrap_reps", c.bootstrap_reps},
           {"level", c.level},
           {"prune", c.prune},
           {"lasso_folds", c.lasso_folds},
           {"gamma_grid", c.gamma_grid},
           {"refit", c.refit},
           {"common", c.common}};
}

void from_json(const json& j, DiscoverConfig& c) {
  j.at("input").get_to(c.input);
  j.at("prior").get_to(c.prior);
  j.at("transpose").get_to(c.transpose);
  j.at("header").get_to(c.header);
  j.at("standardize").get_to(c.standardize_data);
  j.at("bootstrap_reps").get_to(c.bootstrap_reps);
  j.at("level").get_to(c.level);
  j.at("prune").get_to(c.prune);
  j.at("lasso_folds").get_to(c.lasso_folds);
  j.at("gamma_grid").get_to(c.gamma_grid);
  j.at("refit").get_to(c.refit);
  j.at("common").get_to(c.common);
}

int cmd_discover(const DiscoverConfig& cfg) {
  using namespace dlingam;
  const bool has_header =
      cfg.header >= 0 ? cfg.header == 1 : first_line_is_header(cfg.input);
  Dataset raw = load_csv(cfg.input, has_header, !cfg.transpose);
  Dataset data = cfg.standardize_data ? standardize(raw) : center(raw);

  std::optional<PriorKnowledge> prior;
  if (!cfg.prior.empty()) {
    prior = PriorKnowledge::load_csv(cfg.prior);
    if (prior->p() != data.p())
      throw IoError(cfg.prior + ": prior size " + std::to_string(prior->p()) +
                    " does not match variable count " + std::to_string(data.p()));
    if (prior->diagonal_ignored())
      std::cerr << "warning: nonzero diagonal entries in '" << cfg.prior
                << "' were ignored\n";
  }

  const KernelParams params = resolve_params(data.n(), cfg.common);
  DiscoveryStats stats;
  const CausalOrdering order = discover_order(
      data, params, prior ? &*prior : nullptr, cfg.common.threads, &stats);
  const AdjacencyMatrix full = estimate_b(data, order);
  const TotalEffects totals = total_effects(full);

  std::optional<PruneResult> pruned;
  if (cfg.prune) {
    LassoConfig lasso;
    lasso.folds = cfg.lasso_folds;
    lasso.gamma_grid = cfg.gamma_grid;
    lasso.refit = cfg.refit;
    lasso.cv_seed = derive_seed(cfg.common.seed, 0x1a550ULL);
    pruned = prune_adjacency(data, full, lasso, cfg.common.threads);
    for (const auto& [var, msg] : pruned->failures)
      std::cerr << "warning: pruning variable '" << data.label(var)
                << "' failed: " << msg << "\n";
  }
  const AdjacencyMatrix& reported = pruned ? pruned->pruned : full;

  std::optional<BootstrapResult> boot;
  if (cfg.bootstrap_reps > 0)
    boot = bootstrap(data, cfg.bootstrap_reps, cfg.level, params,
                     derive_seed(cfg.common.seed, 0xb007ULL), cfg.common.threads);

  const fs::path out(cfg.common.out);
  fs::create_directories(out);

  std::string ordering_line;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) ordering_line += ",";
    ordering_line += data.label(order[i]);
  }
  write_file(out / "ordering.txt", ordering_line + "\n");
  write_file(out / "b_matrix.csv", labeled_matrix_csv(full.b, data.labels()));
  write_file(out / "total_effects.csv", labeled_matrix_csv(totals.a, data.labels()));
  if (pruned)
    write_file(out / "b_pruned.csv", labeled_matrix_csv(pruned->pruned.b, data.labels()));

  std::string r2 = "variable,r_squared\n";
  for (int i = 0; i < data.p(); ++i)
    r2 += data.label(i) + "," + format_double(r_squared(data, reported, i)) + "\n";
  write_file(out / "r_squared.csv", r2);

  const Eigen::MatrixXi* marks = boot ? &boot->b_significant : nullptr;
  write_file(out / "graph.dot", export_dot(reported.b, data.labels(), marks));
  write_file(out / "graph.json", export_graph_json(reported.b, data.labels(), marks));

  std::string edges = "source,target,coefficient";
  if (boot) edges += ",lower,upper,significant";
  edges += "\n";
  for (int i = 0; i < data.p(); ++i)
    for (int j = 0; j < data.p(); ++j) {
      if (reported.b(i, j) == 0.0) continue;
      edges += data.label(j) + "," + data.label(i) + "," + format_double(reported.b(i, j));
      if (boot)
        edges += "," + format_double(boot->b_lower(i, j)) + "," +
                 format_double(boot->b_upper(i, j)) + "," +
                 (boot->b_significant(i, j) ? std::string("1") : std::string("0"));
      edges += "\n";
    }
  write_file(out / "edges.csv", edges);

  if (boot) {
    std::string te = "source,target,total_effect,lower,upper,significant\n";
    for (int i = 0; i < data.p(); ++i)
      for (int j = 0; j < data.p(); ++j) {
        if (i == j) continue;
        te += data.label(j) + "," + data.label(i) + "," +
              format_double(totals.a(i, j)) + "," + format_double(boot->a_lower(i, j)) +
              "," + format_double(boot->a_upper(i, j)) + "," +
              (boot->a_significant(i, j) ? std::string("1") : std::string("0")) + "\n";
      }
    write_file(out / "total_effect_intervals.csv", te);
    if (boot->dropped > 0)
      std::cerr << "warning: " << boot->dropped << " bootstrap replicates failed\n";
  }

  json manifest = cfg;
  manifest["resolved"] = {{"n", data.n()},
                          {"p", data.p()},
                          {"has_header", has_header},
                          {"sigma", params.sigma},
                          {"kappa", params.kappa},
                          {"max_rank", params.max_rank},
                          {"kgv_evaluations", stats.kgv_evaluations}};
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateConfig {
  int p = 10;
  int n = 1000;
  std::string density = "sparse2";
  double prior_hide = -1.0;  // < 0: no prior file
  CommonOpts common;
};

void to_json(json& j, const SimulateConfig& c) {
  j = json{{"command", "simulate"}, {"p", c.p},
           {"n", c.n},              {"density", c.density},
           {"prior_hide", c.prior_hide}, {"common", c.common}};
}

void from_json(const json& j, SimulateConfig& c) {
  j.at("p").get_to(c.p);
  j.at("n").get_to(c.n);
  j.at("density").get_to(c.density);
  j.at("prior_hide").get_to(c.prior_hide);
  j.at("common").get_to(c.common);
}

std::pair<dlingam::Density, int> parse_density(const std::string& s) {
  if (s == "dense") return {dlingam::Density::dense_full, 0};
  if (s == "sparse2") return {dlingam::Density::sparse, 2};
  if (s == "sparse5") return {dlingam::Density::sparse, 5};
  throw CLI::ValidationError("--density", "expected one of sparse2, sparse5, dense");
}

int cmd_simulate(const SimulateConfig& cfg) {
  using namespace dlingam;
  const auto [density, target] = parse_density(cfg.density);
  DagSpec spec;
  spec.p = cfg.p;
  spec.density = density;
  if (target > 0) spec.target_adjacent = target;
  spec.seed = cfg.common.seed;
  std::mt19937_64 rng(derive_seed(cfg.common.seed, 0x51aULL));
  const BenchmarkInstance inst = generate_instance(spec, cfg.n, rng);

  const fs::path out(cfg.common.out);
  fs::create_directories(out);
  write_file(out / "data.csv", samples_csv(inst.data));
  write_file(out / "true_b.csv", labeled_matrix_csv(inst.true_b.b, inst.data.labels()));

  std::string meta;
  meta += "seed=" + std::to_string(cfg.common.seed) + "\n";
  meta += "p=" + std::to_string(cfg.p) + "\n";
  meta += "n=" + std::to_string(cfg.n) + "\n";
  meta += "density=" + cfg.density + "\n";
  meta += "dists=";
  for (auto d : inst.dists) meta += distribution_letter(d);
  meta += "\npermutation=";
  for (std::size_t i = 0; i < inst.permutation.size(); ++i)
    meta += (i ? " " : "") + std::to_string(inst.permutation[i]);
  meta += "\nordering=";
  for (std::size_t i = 0; i < inst.true_b.ordering.size(); ++i)
    meta += (i ? " " : "") + std::to_string(inst.true_b.ordering[i]);
  meta += "\n";
  write_file(out / "meta.txt", meta);

  if (cfg.prior_hide >= 0.0) {
    std::mt19937_64 prior_rng(derive_seed(cfg.common.seed, 0x70726929ULL));
    mask_prior(inst.true_b, cfg.prior_hide, prior_rng)
        .save_csv((out / "prior.csv").string());
  }

  json manifest = cfg;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchConfig {
  std::vector<int> dims{10};
  std::vector<int> sizes{1000};
  std::string density = "sparse2";
  int reps = 5;
  double prior_hide = -1.0;
  CommonOpts common;
};

void to_json(json& j, const BenchConfig& c) {
  j = json{{"command", "bench"},   {"dims", c.dims},
           {"sizes", c.sizes},     {"density", c.density},
           {"reps", c.reps},       {"prior_hide", c.prior_hide},
           {"common", c.common}};
}

void from_json(const json& j, BenchConfig& c) {
  j.at("dims").get_to(c.dims);
  j.at("sizes").get_to(c.sizes);
  j.at("density").get_to(c.density);
  j.at("reps").get_to(c.reps);
  j.at("prior_hide").get_to(c.prior_hide);
  j.at("common").get_to(c.common);
}

int cmd_bench(const BenchConfig& cfg) {
  using namespace dlingam;
  const auto [density, target] = parse_density(cfg.density);
  BenchmarkGrid grid;
  grid.dims = cfg.dims;
  grid.sizes = cfg.sizes;
  grid.density = density;
  if (target > 0) grid.target_adjacent = target;

  std::optional<double> hide;
  if (cfg.prior_hide >= 0.0) hide = cfg.prior_hide;
  const BenchmarkReport report = run_benchmark(
      grid, cfg.reps, hide, cfg.common.seed, cfg.common.threads,
      [&](int n) { return resolve_params(n, cfg.common); });

  const fs::path out(cfg.common.out);
  fs::create_directories(out);
  write_file(out / "report.csv", report.to_csv());
  write_file(out / "report.txt", report.to_text_table());
  json manifest = cfg;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");

  int failed = 0;
  for (const auto& cell : report.cells) failed += cell.failures;
  if (failed > 0) std::cerr << "warning: " << failed << " repetitions failed\n";
  std::cout << report.to_text_table();
  return 0;
}

// ---------------------------------------------------------------------------
// prune

struct PruneConfig {
  std::string input;
  std::string b_path;
  std::string ordering_path;
  int header = -1;
  bool transpose = false;
  int lasso_folds = 5;
  std::vector<double> gamma_grid{0.5, 1.0, 2.0};
  bool refit = false;
  CommonOpts common;
};

void to_json(json& j, const PruneConfig& c) {
  j = json{{"command", "prune"},
           {"input", c.input},
           {"b", c.b_path},
           {"ordering", c.ordering_path},
           {"header", c.header},
           {"transpose", c.transpose},
           {"lasso_folds", c.lasso_folds},
           {"gamma_grid", c.gamma_grid},
           {"refit", c.refit},
           {"common", c.common}};
}

void from_json(const json& j, PruneConfig& c) {
  j.at("input").get_to(c.input);
  j.at("b").get_to(c.b_path);
  j.at("ordering").get_to(c.ordering_path);
  j.at("header").get_to(c.header);
  j.at("transpose").get_to(c.transpose);
  j.at("lasso_folds").get_to(c.lasso_folds);
  j.at("gamma_grid").get_to(c.gamma_grid);
  j.at("refit").get_to(c.refit);
  j.at("common").get_to(c.common);
}

/// Topological order of the nonzero pattern; used when no ordering file is
/// supplied alongside the coefficient matrix.
dlingam::CausalOrdering ordering_from_support(const dlingam::Matrix& b) {
  const int p = static_cast<int>(b.rows());
  std::vector<int> indegree(static_cast<std::size_t>(p), 0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && b(i, j) != 0.0) ++indegree[static_cast<std::size_t>(i)];
  dlingam::CausalOrdering order;
  std::vector<bool> done(static_cast<std::size_t>(p), false);
  for (int step = 0; step < p; ++step) {
    int pick = -1;
    for (int i = 0; i < p; ++i)
      if (!done[static_cast<std::size_t>(i)] && indegree[static_cast<std::size_t>(i)] == 0) {
        pick = i;
        break;
      }
    if (pick < 0)
      throw dlingam::ValidationError("coefficient matrix has a cycle; supply --ordering");
    done[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (int i = 0; i < p; ++i)
      if (!done[static_cast<std::size_t>(i)] && b(i, pick) != 0.0)
        --indegree[static_cast<std::size_t>(i)];
  }
  return order;
}

int cmd_prune(const PruneConfig& cfg) {
  using namespace dlingam;
  const bool has_header =
      cfg.header >= 0 ? cfg.header == 1 : first_line_is_header(cfg.input);
  Dataset data = center(load_csv(cfg.input, has_header, !cfg.transpose));
  const Matrix b = read_matrix_csv(cfg.b_path);
  if (b.rows() != data.p())
    throw IoError(cfg.b_path + ": matrix size does not match variable count");

  CausalOrdering order;
  if (!cfg.ordering_path.empty()) {
    std::ifstream in(cfg.ordering_path);
    if (!in) throw IoError("cannot open '" + cfg.ordering_path + "'");
    std::string line;
    std::getline(in, line);
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      auto trimmed = std::string(dlingam::detail::trim(token));
      int idx = -1;
      for (int i = 0; i < data.p(); ++i)
        if (data.label(i) == trimmed) idx = i;
      if (idx < 0)
        throw IoError(cfg.ordering_path + ": unknown variable '" + trimmed + "'");
      order.push_back(idx);
    }
  } else {
    order = ordering_from_support(b);
  }

  LassoConfig lasso;
  lasso.folds = cfg.lasso_folds;
  lasso.gamma_grid = cfg.gamma_grid;
  lasso.refit = cfg.refit;
  lasso.cv_seed = derive_seed(cfg.common.seed, 0x1a550ULL);
  const PruneResult result =
      prune_adjacency(data, AdjacencyMatrix{b, order}, lasso, cfg.common.threads);
  for (const auto& [var, msg] : result.failures)
    std::cerr << "warning: pruning variable '" << data.label(var) << "' failed: " << msg
              << "\n";

  const fs::path out(cfg.common.out);
  fs::create_directories(out);
  write_file(out / "b_pruned.csv", labeled_matrix_csv(result.pruned.b, data.labels()));
  write_file(out / "graph.dot", export_dot(result.pruned.b, data.labels()));
  write_file(out / "graph.json", export_graph_json(result.pruned.b, data.labels()));
  json manifest = cfg;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

json load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dlingam::IoError("cannot open manifest '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw dlingam::IoError(path + ": " + e.what());
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal structure estimation for linear non-Gaussian acyclic models"};
  app.require_subcommand(1);

  DiscoverConfig discover_cfg;
  auto* discover = app.add_subcommand(
      "discover", "Estimate a causal ordering and connection strengths from a CSV");
  std::string discover_manifest;
  discover->add_option("--input", discover_cfg.input, "Data CSV (samples as rows)");
  discover->add_option("--prior", discover_cfg.prior,
                       "Prior-knowledge CSV of {0,1,-1}");
  discover->add_flag("--transpose", discover_cfg.transpose,
                     "Input holds variables as rows");
  auto* dh = discover->add_flag_callback(
      "--header", [&] { discover_cfg.header = 1; }, "First input line is a header");
  discover->add_flag_callback("--no-header", [&] { discover_cfg.header = 0; },
                              "Input has no header line")
      ->excludes(dh);
  discover->add_flag("--standardize", discover_cfg.standardize_data,
                     "Scale variables to unit variance before fitting");
  discover->add_option("--bootstrap", discover_cfg.bootstrap_reps,
                       "Bootstrap replicates for confidence intervals");
  discover->add_option("--level", discover_cfg.level, "Confidence level")
      ->check(CLI::Range(0.0, 1.0));
  discover->add_flag("--prune", discover_cfg.prune, "Adaptive-lasso edge pruning");
  discover->add_option("--lasso-folds", discover_cfg.lasso_folds,
                       "Cross-validation folds");
  discover->add_option("--gamma-grid", discover_cfg.gamma_grid,
                       "Adaptive-lasso gamma grid")
      ->delimiter(',');
  discover->add_flag("--refit", discover_cfg.refit,
                     "OLS refit on the selected support");
  discover->add_option("--manifest", discover_manifest,
                       "Re-run the configuration stored in a manifest.json");
  add_common_flags(discover, discover_cfg.common);

  SimulateConfig sim_cfg;
  auto* simulate = app.add_subcommand("simulate", "Generate one synthetic instance");
  std::string sim_manifest;
  simulate->add_option("--p", sim_cfg.p, "Variable count")->check(CLI::Range(2, 10000));
  simulate->add_option("--n", sim_cfg.n, "Sample count")->check(CLI::Range(3, 100000000));
  simulate->add_option("--density", sim_cfg.density, "sparse2, sparse5, or dense");
  simulate->add_option("--prior-hide", sim_cfg.prior_hide,
                       "Also write a prior matrix with this hide probability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--manifest", sim_manifest, "Re-run a stored configuration");
  add_common_flags(simulate, sim_cfg.common);

  BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench", "Synthetic accuracy/time benchmark grid");
  std::string bench_manifest;
  bench->add_option("--dims", bench_cfg.dims, "Variable counts")->delimiter(',');
  bench->add_option("--sizes", bench_cfg.sizes, "Sample sizes")->delimiter(',');
  bench->add_option("--density", bench_cfg.density, "sparse2, sparse5, or dense");
  bench->add_option("--reps", bench_cfg.reps, "Repetitions per cell")
      ->check(CLI::Range(1, 10000));
  bench->add_option("--prior-hide", bench_cfg.prior_hide,
                    "Add a prior-knowledge arm with this hide probability")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--manifest", bench_manifest, "Re-run a stored configuration");
  add_common_flags(bench, bench_cfg.common);

  PruneConfig prune_cfg;
  auto* prune = app.add_subcommand(
      "prune", "Adaptive-lasso pruning of an estimated coefficient matrix");
  std::string prune_manifest;
  prune->add_option("--input", prune_cfg.input, "Data CSV (samples as rows)");
  prune->add_option("--b", prune_cfg.b_path, "Coefficient matrix CSV");
  prune->add_option("--ordering", prune_cfg.ordering_path,
                    "Ordering file (comma-separated labels)");
  auto* ph = prune->add_flag_callback(
      "--header", [&] { prune_cfg.header = 1; }, "First input line is a header");
  prune->add_flag_callback("--no-header", [&] { prune_cfg.header = 0; },
                           "Input has no header line")
      ->excludes(ph);
  prune->add_flag("--transpose", prune_cfg.transpose, "Input holds variables as rows");
  prune->add_option("--lasso-folds", prune_cfg.lasso_folds, "Cross-validation folds");
  prune->add_option("--gamma-grid", prune_cfg.gamma_grid, "Adaptive-lasso gamma grid")
      ->delimiter(',');
  prune->add_flag("--refit", prune_cfg.refit, "OLS refit on the selected support");
  prune->add_option("--manifest", prune_manifest, "Re-run a stored configuration");
  add_common_flags(prune, prune_cfg.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(discover)) {
      if (!discover_manifest.empty()) {
        DiscoverConfig from_file = load_manifest(discover_manifest).get<DiscoverConfig>();
        if (discover->count("--out")) from_file.common.out = discover_cfg.common.out;
        return cmd_discover(from_file);
      }
      if (discover_cfg.input.empty())
        throw CLI::RequiredError("--input");
      return cmd_discover(discover_cfg);
    }
    if (app.got_subcommand(simulate)) {
      if (!sim_manifest.empty()) {
        SimulateConfig from_file = load_manifest(sim_manifest).get<SimulateConfig>();
        if (simulate->count("--out")) from_file.common.out = sim_cfg.common.out;
        return cmd_simulate(from_file);
      }
      return cmd_simulate(sim_cfg);
    }
    if (app.got_subcommand(bench)) {
      if (!bench_manifest.empty()) {
        BenchConfig from_file = load_manifest(bench_manifest).get<BenchConfig>();
        if (bench->count("--out")) from_file.common.out = bench_cfg.common.out;
        return cmd_bench(from_file);
      }
      return cmd_bench(bench_cfg);
    }
    if (app.got_subcommand(prune)) {
      if (!prune_manifest.empty()) {
        PruneConfig from_file = load_manifest(prune_manifest).get<PruneConfig>();
        if (prune->count("--out")) from_file.common.out = prune_cfg.common.out;
        return cmd_prune(from_file);
      }
      if (prune_cfg.input.empty() || prune_cfg.b_path.empty())
        throw CLI::RequiredError(prune_cfg.input.empty() ? "--input" : "--b");
      return cmd_prune(prune_cfg);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dlingam::IoError& e) {
    std::cerr << "error:io: " << e.what() << "\n";
    return kExitIo;
  } catch (const dlingam::ValidationError& e) {
    std::cerr << "error:usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dlingam::NumericError& e) {
    std::cerr << "error:numeric: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error:numeric: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
