#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace dlingam;

TEST_CASE("bootstrap rejects bad arguments") {
  const auto model = testing_support::make_three_var_model(200, 90);
  CHECK_THROWS_AS(bootstrap(model.data, 99, 0.95, default_params(200), 1),
                  ValidationError);
  CHECK_THROWS_AS(bootstrap(model.data, 200, 1.0, default_params(200), 1),
                  ValidationError);
}

TEST_CASE("bootstrap intervals cover the worked model's strengths") {
  const auto model = testing_support::make_three_var_model(1000, 91);
  const BootstrapResult r =
      bootstrap(model.data, 150, 0.95, default_params(1000), 91, 2);
  CHECK(r.dropped == 0);
  // b(0, 1) carries the 1.5 edge from x2 to x1
  CHECK(r.b_lower(0, 1) <= 1.5);
  CHECK(r.b_upper(0, 1) >= 1.5);
  CHECK(r.b_significant(0, 1) == 1);
  // total effect a(2, 1) = -0.3
  CHECK(r.a_lower(2, 1) <= -0.1);
  CHECK(r.a_upper(2, 1) >= -0.5);
}

TEST_CASE("independent data yields no significant edges") {
  std::mt19937_64 rng(92);
  const int n = 600;
  Matrix v(3, n);
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < n; ++s) v(i, s) = testing_support::uniform_unit_var(rng);
  const Dataset d(v);
  const BootstrapResult r = bootstrap(d, 150, 0.95, default_params(n), 92, 2);
  CHECK(significant_edges(r).empty());
}

TEST_CASE("total-effect intervals pin the diagonal at exactly one") {
  const auto model = testing_support::make_three_var_model(400, 93);
  const BootstrapResult r =
      bootstrap(model.data, 120, 0.95, default_params(400), 93, 2);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.a_lower(i, i) == 1.0);
    CHECK(r.a_upper(i, i) == 1.0);
  }
}

TEST_CASE("widening the level never shrinks an interval") {
  const auto model = testing_support::make_three_var_model(400, 94);
  const KernelParams params = default_params(400);
  const BootstrapResult narrow = bootstrap(model.data, 120, 0.90, params, 94, 2);
  const BootstrapResult wide = bootstrap(model.data, 120, 0.99, params, 94, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(wide.b_lower(i, j) <= narrow.b_lower(i, j));
      CHECK(wide.b_upper(i, j) >= narrow.b_upper(i, j));
    }
}

TEST_CASE("bootstrap is deterministic under a fixed seed") {
  const auto model = testing_support::make_three_var_model(300, 95);
  const KernelParams params = default_params(300);
  const BootstrapResult a = bootstrap(model.data, 110, 0.95, params, 17, 2);
  const BootstrapResult b = bootstrap(model.data, 110, 0.95, params, 17, 1);
  CHECK(a.b_lower == b.b_lower);
  CHECK(a.b_upper == b.b_upper);
  CHECK(a.a_lower == b.a_lower);
  CHECK(a.a_upper == b.a_upper);
}

TEST_CASE("significant_edges reads the interval matrices") {
  BootstrapResult r;
  r.labels = {"x1", "x2"};
  r.b_lower = Matrix::Zero(2, 2);
  r.b_upper = Matrix::Zero(2, 2);
  r.b_significant = Eigen::MatrixXi::Zero(2, 2);
  r.a_significant = Eigen::MatrixXi::Zero(2, 2);

  // all intervals straddle zero
  r.b_lower(1, 0) = -0.1;
  r.b_upper(1, 0) = 0.1;
  CHECK(significant_edges(r).empty());

  // interval (0.2, 0.9) for b(1, 0): edge source 0 -> target 1
  r.b_lower(1, 0) = 0.2;
  r.b_upper(1, 0) = 0.9;
  r.b_significant(1, 0) = 1;
  const auto edges = significant_edges(r);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].source == 0);
  CHECK(edges[0].target == 1);
  CHECK(edges[0].lower == 0.2);
  CHECK(edges[0].upper == 0.9);
}
