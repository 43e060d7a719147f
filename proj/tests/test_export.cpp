#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "test_helpers.hpp"

using namespace dlingam;

TEST_CASE("empty matrix renders isolated nodes") {
  const std::string dot = export_dot(Matrix::Zero(3, 3), {"a", "b", "c"});
  CHECK(dot.find("\"a\";") != std::string::npos);
  CHECK(dot.find("\"b\";") != std::string::npos);
  CHECK(dot.find("\"c\";") != std::string::npos);
  CHECK(dot.find("->") == std::string::npos);
}

TEST_CASE("worked model renders its three edges") {
  Matrix b = Matrix::Zero(3, 3);
  b(0, 1) = 1.5;
  b(2, 0) = 0.8;
  b(2, 1) = -1.5;
  const std::string dot = export_dot(b, {"x1", "x2", "x3"});
  CHECK(dot.find("\"x2\" -> \"x1\" [label=\"1.50\"]") != std::string::npos);
  CHECK(dot.find("\"x1\" -> \"x3\" [label=\"0.80\"]") != std::string::npos);
  CHECK(dot.find("\"x2\" -> \"x3\" [label=\"-1.50\"]") != std::string::npos);
}

TEST_CASE("rendering is deterministic and formats two decimals") {
  Matrix b = Matrix::Zero(2, 2);
  b(1, 0) = 0.123456;
  const std::string once = export_dot(b, {"u", "v"});
  const std::string twice = export_dot(b, {"u", "v"});
  CHECK(once == twice);
  CHECK(once.find("label=\"0.12\"") != std::string::npos);
}

TEST_CASE("significance marks style the edges") {
  Matrix b = Matrix::Zero(2, 2);
  b(1, 0) = 0.5;
  b(0, 1) = 0.0;
  Eigen::MatrixXi marks = Eigen::MatrixXi::Zero(2, 2);

  marks(1, 0) = 1;
  const std::string strong = export_dot(b, {"u", "v"}, &marks);
  CHECK(strong.find("penwidth=2") != std::string::npos);

  marks(1, 0) = 0;
  const std::string weak = export_dot(b, {"u", "v"}, &marks);
  CHECK(weak.find("style=dashed") != std::string::npos);
}

TEST_CASE("json export mirrors the dot structure") {
  Matrix b = Matrix::Zero(3, 3);
  b(0, 1) = 1.5;
  b(2, 0) = 0.8;
  const auto graph = nlohmann::json::parse(export_graph_json(b, {"x1", "x2", "x3"}));
  CHECK(graph["nodes"].size() == 3);
  REQUIRE(graph["edges"].size() == 2);
  CHECK(graph["edges"][0]["source"] == "x2");
  CHECK(graph["edges"][0]["target"] == "x1");
  CHECK(graph["edges"][0]["coefficient"] == Catch::Approx(1.5));
}
