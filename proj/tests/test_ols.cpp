#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "varsel/criteria.hpp"
#include "varsel/ols.hpp"

using namespace varsel;
using varsel::testing::relative_error;
using varsel::testing::univariate;

namespace {

RegressionSystem system_of(const Matrix& X, const Matrix& Y) {
  RegressionSystem sys;
  sys.X = X;
  sys.Y = Y;
  return sys;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = g(rng);
  return m;
}

}  // namespace

TEST_CASE("consistent system solves exactly") {
  Matrix X(3, 2), Y(3, 1);
  X << 1, 1, 2, 1, 3, 1;
  Y << 2, 3, 4;
  const Matrix theta = solve_least_squares(system_of(X, Y));
  CHECK(theta(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(theta(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("duplicated column is rank deficient") {
  std::mt19937_64 rng(3);
  Matrix X = random_matrix(rng, 20, 4);
  X.col(2) = X.col(0);
  try {
    solve_least_squares(system_of(X, random_matrix(rng, 20, 2)));
    FAIL("expected RankDeficient");
  } catch (const RankDeficient& e) {
    CHECK(e.rank() == 3);
    CHECK(e.columns() == 4);
  }
}

TEST_CASE("too few rows is rejected") {
  CHECK_THROWS_AS(solve_least_squares(system_of(Matrix::Ones(2, 2), Matrix::Ones(2, 1))),
                  DimensionMismatch);
}

TEST_CASE("recovers a known theta from noiseless targets") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix X = random_matrix(rng, 50, 5);
    const Matrix theta_star = random_matrix(rng, 5, 3);
    const Matrix theta = solve_least_squares(system_of(X, X * theta_star));
    CHECK(relative_error(theta, theta_star) <= 1e-10);
  }
}

TEST_CASE("matches the normal-equations solution on noisy data") {
  const auto ds = varsel::testing::noisy_var2(11, 300, 0.5);
  const auto sys = build_regression_system(ds, make_config(ds, 2, 0));
  const Matrix via_qr = solve_least_squares(sys);
  const Matrix gram = sys.X.transpose() * sys.X;
  const Matrix via_normal = gram.llt().solve(sys.X.transpose() * sys.Y);
  CHECK(relative_error(via_qr, via_normal) <= 1e-8);
}

TEST_CASE("unflatten examples") {
  const auto ds = univariate({1, 2, 3, 4, 5});
  Matrix theta(2, 1);
  theta << 1, 1;
  auto c = unflatten_coefficients(theta, make_config(ds, 1, 0), ds);
  REQUIRE(c.A.size() == 1);
  CHECK(c.A[0](0, 0) == 1);
  CHECK(c.B.empty());
  REQUIRE(c.C);
  CHECK((*c.C)(0) == 1);

  Matrix obs(6, 2);
  obs.setRandom();
  const TimeSeriesDataset yz(obs, {"y", "z"}, {Role::Dependent, Role::Independent});
  Matrix abc(3, 1);
  abc << 0.25, -1.5, 3.0;
  c = unflatten_coefficients(abc, make_config(yz, 1, 1), yz);
  CHECK(c.A[0](0, 0) == 0.25);
  CHECK(c.B[0](0, 0) == -1.5);
  CHECK((*c.C)(0) == 3.0);

  CHECK_THROWS_AS(unflatten_coefficients(Matrix::Zero(4, 1), make_config(yz, 1, 1), yz),
                  DimensionMismatch);
}

TEST_CASE("flatten inverts unflatten") {
  std::mt19937_64 rng(99);
  Matrix obs = random_matrix(rng, 30, 5);
  const TimeSeriesDataset ds(obs, {"a", "b", "c", "d", "e"},
                             {Role::Dependent, Role::Independent, Role::Dependent,
                              Role::Dependent, Role::Independent});
  for (std::size_t p = 1; p <= 3; ++p)
    for (std::size_t q = 0; q <= 2; ++q)
      for (bool c : {true, false}) {
        const auto cfg = make_config(ds, p, q, c);
        const Matrix theta = random_matrix(rng, static_cast<Eigen::Index>(cfg.regressor_count()), 3);
        const auto coeffs = unflatten_coefficients(theta, cfg, ds);
        CHECK(coeffs.A.size() == p);
        CHECK(coeffs.B.size() == q);
        CHECK(coeffs.scalar_count() == static_cast<std::size_t>(theta.size()));
        CHECK(flatten_coefficients(coeffs) == theta);
      }
}

TEST_CASE("residual covariance examples") {
  Matrix X(3, 2), Y(3, 1);
  X << 1, 1, 2, 1, 3, 1;
  Y << 2, 3, 4;
  Matrix theta(2, 1);
  theta << 1, 1;
  auto rc = residual_covariance(system_of(X, Y), theta);
  CHECK(rc.sigma.norm() == 0.0);

  Matrix X2 = Matrix::Zero(2, 1), Y2(2, 1);
  Y2 << 1, -1;
  rc = residual_covariance(system_of(X2, Y2), Matrix::Zero(1, 1));
  CHECK(rc.sigma(0, 0) == 1.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix Xr = random_matrix(rng, 15, 3);
    const Matrix Yr = random_matrix(rng, 15, 3);
    rc = residual_covariance(system_of(Xr, Yr), random_matrix(rng, 3, 3));
    CHECK(rc.sigma == rc.sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rc.sigma);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
  }
}

TEST_CASE("fit of an exact recurrence") {
  const auto ds = univariate({1, 2, 3, 4});
  const auto f = fit(ds, make_config(ds, 1, 0));
  CHECK(f.coefficients.A[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((*f.coefficients.C)(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.residuals.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(f.degenerate);
  CHECK(f.criterion_values.at(CriterionKind::AIC) == -std::numeric_limits<double>::infinity());
  CHECK(f.effective_T == 3);
  CHECK(f.n_params == 2);
}

TEST_CASE("noiseless VAR(2) with three variables is recovered") {
  const auto spec = varsel::testing::recovery_spec(77, 3, 2, false, true);
  const auto ds = generate(spec);
  const auto f = fit(ds, varsel::testing::true_config(spec, ds));
  CHECK(relative_error(f.theta, flatten_coefficients(spec.true_coefficients)) <= 1e-8);
}

TEST_CASE("FitResult invariants and residual orthogonality") {
  std::vector<std::pair<TimeSeriesDataset, ModelConfig>> corpus;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto ds = varsel::testing::noisy_var2(s, 200, 0.5);
    for (std::size_t p = 1; p <= 4; ++p) corpus.emplace_back(ds, make_config(ds, p, 0));
  }
  for (const auto& spec : varsel::testing::recovery_corpus()) {
    const auto ds = generate(spec);
    corpus.emplace_back(ds, varsel::testing::true_config(spec, ds));
  }
  for (const auto& [ds, cfg] : corpus) {
    const auto f = fit(ds, cfg);
    const auto sys = build_regression_system(ds, cfg);
    const double bound = 1e-8 * sys.X.norm() * sys.Y.norm();
    CHECK((sys.X.transpose() * f.residuals).cwiseAbs().maxCoeff() <= bound);
    CHECK(f.n_params == count_parameters(cfg, ds));
    CHECK(f.sigma == f.sigma.transpose());
  }
}

TEST_CASE("OLS minimizes ln det sigma against perturbations") {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> g;
  const auto ds = varsel::testing::noisy_var2(8, 250, 0.5);
  const auto cfg = make_config(ds, 2, 0);
  const auto f = fit(ds, cfg);
  const auto sys = build_regression_system(ds, cfg);
  const double base = log_det_cov(f.sigma);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix theta = f.theta;
    const double scale = std::pow(10.0, -4.0 + 4.0 * (trial % 10) / 9.0);
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) += scale * g(rng);
    const auto rc = residual_covariance(sys, theta);
    CHECK(log_det_cov(rc.sigma) >= base - 1e-9);
  }
}

TEST_CASE("fit is deterministic") {
  const auto ds = varsel::testing::noisy_var2(4, 300, 0.5);
  const auto a = fit(ds, make_config(ds, 3, 0));
  const auto b = fit(ds, make_config(ds, 3, 0));
  CHECK(a.theta == b.theta);
  CHECK(a.sigma == b.sigma);
  CHECK(a.criterion_values == b.criterion_values);
}

TEST_CASE("fit propagates rank deficiency") {
  Matrix obs(30, 2);
  for (Eigen::Index i = 0; i < 30; ++i) obs.row(i) << std::sin(0.3 * static_cast<double>(i)), 0.0;
  obs.col(1).tail(29) = obs.col(0).head(29);  // z(j) = y(j-1), so z lag 1 = y lag 2
  const TimeSeriesDataset ds(obs, {"y", "z"}, {Role::Dependent, Role::Independent});
  CHECK_THROWS_AS(fit(ds, make_config(ds, 2, 1)), RankDeficient);
}
