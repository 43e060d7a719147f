#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace dlingam;
using testing_support::random_matrix;

TEST_CASE("default parameters follow the sample-size prescription") {
  const KernelParams large = default_params(1001);
  CHECK(large.sigma == 0.5);
  CHECK(large.kappa == 0.002);

  const KernelParams boundary = default_params(1000);
  CHECK(boundary.sigma == 1.0);
  CHECK(boundary.kappa == 0.02);

  const KernelParams small = default_params(500);
  CHECK(small.sigma == 1.0);
  CHECK(small.kappa == 0.02);
  CHECK(small.max_rank == 60);
  CHECK(default_params(40).max_rank == 40);
  CHECK_THROWS_AS(default_params(2), ValidationError);
}

TEST_CASE("incomplete Cholesky of constant data is the all-ones matrix") {
  const Vector y = Vector::Constant(25, 3.7);
  const LowRankGram low = incomplete_cholesky(y, default_params(25));
  CHECK(low.factor.cols() == 1);
  const Matrix k = low.factor * low.factor.transpose();
  CHECK((k.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(low.residual_trace < 1e-10);
}

TEST_CASE("incomplete Cholesky reproduces the dense Gram matrix") {
  std::mt19937_64 rng(31);
  const Vector y = random_matrix(1, 50, rng).transpose();
  KernelParams params = default_params(50);
  params.pivot_tol = 1e-12;
  params.max_rank = 50;
  const LowRankGram low = incomplete_cholesky(y, params);
  const Matrix dense = testing_support::dense_gram(y, params.sigma);
  CHECK((low.factor * low.factor.transpose() - dense).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(low.residual_trace <= params.pivot_tol * 50 + 1e-12);
}

TEST_CASE("duplicate samples bound the factor rank") {
  Vector y(30);
  for (int i = 0; i < 30; ++i) y(i) = static_cast<double>(i % 5);
  KernelParams params = default_params(30);
  params.pivot_tol = 1e-12;
  params.max_rank = 30;
  const LowRankGram low = incomplete_cholesky(y, params);
  CHECK(low.factor.cols() <= 5);
  const Matrix dense = testing_support::dense_gram(y, params.sigma);
  CHECK((low.factor * low.factor.transpose() - dense).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rank cap is a valid stop") {
  std::mt19937_64 rng(32);
  const Vector y = random_matrix(1, 80, rng).transpose();
  KernelParams params = default_params(80);
  params.max_rank = 7;
  params.pivot_tol = 1e-15;
  const LowRankGram low = incomplete_cholesky(y, params);
  CHECK(low.factor.cols() == 7);
  CHECK(low.pivots.size() == 7);
}

TEST_CASE("copied rows carry more mutual information than shuffled ones") {
  std::mt19937_64 rng(33);
  Vector y = random_matrix(1, 300, rng).transpose();
  const KernelParams params = default_params(300);
  const double dependent = kgv_mi(y, y, params);
  Vector shuffled = y;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double independent = kgv_mi(y, shuffled, params);
  CHECK(dependent > independent);
  CHECK(dependent > 0.5);
}

TEST_CASE("independent rows sit inside their permutation null") {
  std::mt19937_64 rng(34);
  const int n = 1000;
  Vector y1(n), y2(n);
  for (int i = 0; i < n; ++i) {
    y1(i) = testing_support::uniform_unit_var(rng);
    y2(i) = testing_support::uniform_unit_var(rng);
  }
  const KernelParams params = default_params(n);
  const double observed = kgv_mi(y1, y2, params);
  int above = 0;
  const int shuffles = 200;
  Vector perm = y2;
  for (int s = 0; s < shuffles; ++s) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (kgv_mi(y1, perm, params) >= observed) ++above;
  }
  // observed value below the 95th percentile of its own null
  CHECK(above >= shuffles / 20);
}

TEST_CASE("low-rank path agrees with the dense determinant path") {
  std::mt19937_64 rng(35);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 100;
    Vector y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      y1(i) = gauss(rng);
      y2(i) = 0.3 * trial * y1(i) + gauss(rng);
    }
    KernelParams params = default_params(n);
    params.max_rank = n;
    params.pivot_tol = 1e-12;
    const double low = kgv_mi(y1, y2, params);
    const double dense = kgv_mi_dense(y1, y2, params);
    CHECK(std::abs(low - dense) <=
          1e-6 * std::max({std::abs(low), std::abs(dense), 1e-12}));
  }
}

TEST_CASE("kgv_mi is nonnegative and symmetric") {
  std::mt19937_64 rng(36);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 30 + static_cast<int>(rng() % 80);
    Vector y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      y1(i) = gauss(rng);
      y2(i) = gauss(rng) + (trial % 3 == 0 ? 0.5 * y1(i) : 0.0);
    }
    const KernelParams params = default_params(n);
    const double ab = kgv_mi(y1, y2, params);
    const double ba = kgv_mi(y2, y1, params);
    CHECK(ab >= -1e-10);
    CHECK(std::abs(ab - ba) <= 1e-10);
  }
}

TEST_CASE("noisy copies order above independent pairs") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss;
  const int n = 1000;
  double mean_dependent = 0.0, mean_independent = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    Vector x(n), noisy(n), indep(n);
    for (int i = 0; i < n; ++i) {
      x(i) = gauss(rng);
      noisy(i) = x(i) + 0.1 * gauss(rng);
      indep(i) = gauss(rng);
    }
    const KernelParams params = default_params(n);
    mean_dependent += kgv_mi(x, noisy, params) / seeds;
    mean_independent += kgv_mi(x, indep, params) / seeds;
  }
  CHECK(mean_dependent > mean_independent);
}

TEST_CASE("degenerate factor gains raise instead of returning garbage") {
  KernelFactor bad1, bad2;
  bad1.basis = Matrix::Identity(4, 1);
  bad1.gain = Vector::Constant(1, 1.5);  // impossible gain, forces s > 1
  bad2.basis = Matrix::Identity(4, 1);
  bad2.gain = Vector::Constant(1, 1.0);
  CHECK_THROWS_AS(kgv_mi_from_factors(bad1, bad2), NumericError);
}

TEST_CASE("constant rows carry zero mutual information") {
  std::mt19937_64 rng(38);
  const Vector y = random_matrix(1, 50, rng).transpose();
  const Vector flat = Vector::Constant(50, 2.0);
  CHECK(kgv_mi(y, flat, default_params(50)) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("t_kernel with two active variables is a single MI term") {
  std::mt19937_64 rng(39);
  const Dataset d(random_matrix(3, 120, rng));
  const KernelParams params = default_params(120);
  const double t = t_kernel(d, 0, {0, 2}, params);
  const Vector residual = simple_regress_residual(d.row(2), d.row(0));
  const double mi = kgv_mi(d.row(0), residual, params);
  CHECK(t == Catch::Approx(mi).epsilon(1e-12));
}

TEST_CASE("t_kernel is smallest for the worked model's exogenous variable") {
  const auto model = testing_support::make_three_var_model(2000, 41);
  const KernelParams params = default_params(2000);
  const VariableSet active{0, 1, 2};
  const double t1 = t_kernel(model.data, 0, active, params);
  const double t2 = t_kernel(model.data, 1, active, params);
  const double t3 = t_kernel(model.data, 2, active, params);
  CHECK(t2 < t1);
  CHECK(t2 < t3);
}

TEST_CASE("mutually independent variables give comparable t values") {
  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 500;
    Matrix v(3, n);
    for (int i = 0; i < 3; ++i)
      for (int s = 0; s < n; ++s) v(i, s) = testing_support::uniform_unit_var(rng);
    const Dataset d(v);
    const KernelParams params = default_params(n);
    const VariableSet active{0, 1, 2};
    std::vector<double> t;
    for (int j = 0; j < 3; ++j) t.push_back(t_kernel(d, j, active, params));
    const double lo = *std::min_element(t.begin(), t.end());
    const double hi = *std::max_element(t.begin(), t.end());
    CHECK(hi <= 3.0 * std::max(lo, 1e-6));
  }
}
