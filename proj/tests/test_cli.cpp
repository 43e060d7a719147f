#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("dlingam_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(DLINGAM_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_worked_model_csv(const fs::path& p, int n, std::uint64_t seed) {
  const auto model = testing_support::make_three_var_model(n, seed);
  std::ofstream out(p);
  out << "x1,x2,x3\n";
  for (int s = 0; s < n; ++s)
    out << model.data.values()(0, s) << "," << model.data.values()(1, s) << ","
        << model.data.values()(2, s) << "\n";
}

}  // namespace

TEST_CASE("discover writes the full artifact set") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 1500, 1001);
  const fs::path out = dir.path / "run";
  const int code =
      run("discover --input " + data.string() + " --out " + out.string() +
          " --seed 5 --threads 2");
  REQUIRE(code == 0);
  for (const char* name : {"ordering.txt", "b_matrix.csv", "total_effects.csv",
                           "r_squared.csv", "graph.dot", "graph.json", "edges.csv",
                           "manifest.json"})
    CHECK(fs::exists(out / name));
  CHECK(slurp(out / "ordering.txt") == "x2,x1,x3\n");
  const std::string b_csv = slurp(out / "b_matrix.csv");
  CHECK(b_csv.rfind(",x1,x2,x3\n", 0) == 0);
}

TEST_CASE("missing input exits with the io code and writes nothing") {
  TempDir dir;
  const fs::path out = dir.path / "run";
  const int code = run("discover --input " + (dir.path / "absent.csv").string() +
                       " --out " + out.string());
  CHECK(code == 3);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("malformed prior matrix exits with the io code") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 300, 1002);
  const fs::path prior = dir.path / "prior.csv";
  {
    std::ofstream out(prior);
    out << "0,1,0\n0,0,5\n0,0,0\n";
  }
  const int code = run("discover --input " + data.string() + " --prior " +
                       prior.string() + " --out " + (dir.path / "run").string());
  CHECK(code == 3);
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run("discover") == 2);
  CHECK(run("nonsense") == 2);
  TempDir dir;
  CHECK(run("simulate --p 4 --density banana --out " + (dir.path / "o").string()) == 2);
  CHECK(run("") == 2);
}

TEST_CASE("simulate is deterministic per seed") {
  TempDir dir;
  const fs::path a = dir.path / "a";
  const fs::path b = dir.path / "b";
  REQUIRE(run("simulate --p 6 --n 200 --density sparse2 --seed 7 --out " +
              a.string()) == 0);
  REQUIRE(run("simulate --p 6 --n 200 --density sparse2 --seed 7 --out " +
              b.string()) == 0);
  CHECK(slurp(a / "data.csv") == slurp(b / "data.csv"));
  CHECK(slurp(a / "true_b.csv") == slurp(b / "true_b.csv"));
  CHECK(slurp(a / "meta.txt") == slurp(b / "meta.txt"));
}

TEST_CASE("simulate dense p=4 produces six edges") {
  TempDir dir;
  const fs::path out = dir.path / "dense";
  REQUIRE(run("simulate --p 4 --n 50 --density dense --seed 3 --out " +
              out.string()) == 0);
  const std::string csv = slurp(out / "true_b.csv");
  // count nonzero cells in the labeled matrix body
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int nonzero = 0;
  while (std::getline(lines, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // row label
    while (std::getline(ss, cell, ','))
      if (std::stod(cell) != 0.0) ++nonzero;
  }
  CHECK(nonzero == 6);
}

TEST_CASE("discover reruns byte-for-byte from its manifest") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 800, 1003);
  const fs::path first = dir.path / "first";
  const fs::path second = dir.path / "second";
  REQUIRE(run("discover --input " + data.string() + " --out " + first.string() +
              " --seed 11 --threads 2") == 0);
  REQUIRE(run("discover --manifest " + (first / "manifest.json").string() +
              " --out " + second.string()) == 0);
  for (const char* name :
       {"ordering.txt", "b_matrix.csv", "total_effects.csv", "r_squared.csv",
        "graph.dot", "graph.json", "edges.csv"})
    CHECK(slurp(first / name) == slurp(second / name));
}

TEST_CASE("discover accepts a prior and simulate can emit one") {
  TempDir dir;
  const fs::path inst = dir.path / "inst";
  REQUIRE(run("simulate --p 5 --n 600 --density sparse2 --seed 21 --prior-hide 0.5 "
              "--out " + inst.string()) == 0);
  REQUIRE(fs::exists(inst / "prior.csv"));
  const fs::path out = dir.path / "run";
  REQUIRE(run("discover --input " + (inst / "data.csv").string() + " --prior " +
              (inst / "prior.csv").string() + " --out " + out.string() +
              " --threads 2") == 0);
  CHECK(fs::exists(out / "ordering.txt"));
}

TEST_CASE("bench writes a one-cell report") {
  TempDir dir;
  const fs::path out = dir.path / "bench";
  REQUIRE(run("bench --dims 4 --sizes 300 --density sparse2 --reps 1 --seed 9 "
              "--threads 2 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "report.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind("p,n,density,reps,failures,median_distance,median_fit_seconds", 0) == 0);
  CHECK(fs::exists(out / "report.txt"));
}

TEST_CASE("bench with prior hiding gains the prior column block") {
  TempDir dir;
  const fs::path out = dir.path / "bench";
  REQUIRE(run("bench --dims 4 --sizes 300 --density sparse2 --reps 1 --seed 9 "
              "--prior-hide 0.5 --threads 2 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "report.csv");
  CHECK(csv.find("prior_median_distance,prior_median_fit_seconds") != std::string::npos);
}

TEST_CASE("prune the full matrix of a discover run") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 1200, 1004);
  const fs::path fit = dir.path / "fit";
  REQUIRE(run("discover --input " + data.string() + " --out " + fit.string() +
              " --threads 2") == 0);
  const fs::path pruned = dir.path / "pruned";
  REQUIRE(run("prune --input " + data.string() + " --b " +
              (fit / "b_matrix.csv").string() + " --ordering " +
              (fit / "ordering.txt").string() + " --out " + pruned.string() +
              " --threads 2") == 0);
  CHECK(fs::exists(pruned / "b_pruned.csv"));
  CHECK(fs::exists(pruned / "graph.dot"));
}

TEST_CASE("discover with bootstrap adds interval artifacts") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 500, 1005);
  const fs::path out = dir.path / "run";
  REQUIRE(run("discover --input " + data.string() + " --out " + out.string() +
              " --bootstrap 120 --level 0.95 --seed 2 --threads 2") == 0);
  CHECK(fs::exists(out / "total_effect_intervals.csv"));
  const std::string edges = slurp(out / "edges.csv");
  CHECK(edges.rfind("source,target,coefficient,lower,upper,significant", 0) == 0);
}

TEST_CASE("inputs are never mutated") {
  TempDir dir;
  const fs::path data = dir.path / "data.csv";
  write_worked_model_csv(data, 400, 1006);
  const std::string before = slurp(data);
  REQUIRE(run("discover --input " + data.string() + " --out " +
              (dir.path / "run").string()) == 0);
  CHECK(slurp(data) == before);
}
