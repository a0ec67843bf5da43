#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "varsel/design.hpp"
#include "varsel/ols.hpp"
#include "varsel/synthesis.hpp"

using namespace varsel;
using varsel::testing::relative_error;
using varsel::testing::univariate;

namespace {

CoefficientSet ar(std::vector<double> a, std::optional<double> c = std::nullopt) {
  CoefficientSet out;
  for (double v : a) out.A.push_back(Matrix::Constant(1, 1, v));
  if (c) out.C = RowVector::Constant(1, *c);
  return out;
}

}  // namespace

TEST_CASE("companion spectral radius") {
  CoefficientSet half;
  half.A = {0.5 * Matrix::Identity(2, 2)};
  CHECK(companion_spectral_radius(half) == doctest::Approx(0.5).epsilon(1e-12));

  CoefficientSet unit;
  unit.A = {Matrix::Identity(2, 2)};
  CHECK(companion_spectral_radius(unit) == doctest::Approx(1.0).epsilon(1e-12));

  // largest root of x^2 - 0.5x - 0.3
  const double root = (0.5 + std::sqrt(0.25 + 1.2)) / 2.0;
  CHECK(companion_spectral_radius(ar({0.5, 0.3})) == doctest::Approx(root).epsilon(1e-10));
  CHECK(root == doctest::Approx(0.8520797289).epsilon(1e-9));

  // complex dominant pair: x^2 - 2 r cos(w) x + r^2
  const double r = 0.9, w = 1.1;
  CHECK(companion_spectral_radius(ar({2 * r * std::cos(w), -r * r})) ==
        doctest::Approx(r).epsilon(1e-10));

  CHECK_THROWS(companion_spectral_radius(CoefficientSet{}));
}

TEST_CASE("geometric decay from a forced start") {
  GeneratorSpec spec;
  spec.true_coefficients.A = {0.5 * Matrix::Identity(2, 2)};
  spec.initial_values = Matrix::Ones(1, 2);
  spec.burn_in = 0;
  spec.T = 3;
  const auto ds = generate(spec);
  CHECK(ds.observations()(0, 0) == 1.0);
  CHECK(ds.observations()(1, 0) == 0.5);
  CHECK(ds.observations()(1, 1) == 0.5);
  CHECK(ds.observations()(2, 0) == 0.25);
  CHECK(ds.observations()(2, 1) == 0.25);
  CHECK(ds.names() == std::vector<std::string>{"y1", "y2"});
}

TEST_CASE("generation is deterministic per seed") {
  const auto c = random_stable_coefficients(11, 2, 2, 1, 1, true, 0.7);
  CHECK(companion_spectral_radius(c) == doctest::Approx(0.7).epsilon(1e-9));
  GeneratorSpec spec;
  spec.true_coefficients = c;
  spec.noise_scale = 1.0;
  spec.exogenous = ExogenousKind::RandomWalk;
  spec.seed = 77;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.observations() == b.observations());
  CHECK(a.roles().back() == Role::Independent);
  spec.seed = 78;
  CHECK(generate(spec).observations() != a.observations());
}

TEST_CASE("noisy unstable specs are rejected") {
  GeneratorSpec spec;
  spec.true_coefficients = ar({1.0});
  spec.noise_scale = 0.1;
  CHECK_THROWS_AS(generate(spec), Unstable);
  spec.noise_scale = 0.0;
  CHECK_NOTHROW(generate(spec));
}

TEST_CASE("supplied exogenous series is used verbatim") {
  GeneratorSpec spec;
  spec.true_coefficients.A = {Matrix::Constant(1, 1, 0.2)};
  spec.true_coefficients.B = {Matrix::Constant(1, 1, 1.0)};
  spec.exogenous = ExogenousKind::Supplied;
  spec.burn_in = 2;
  spec.T = 4;
  spec.supplied_exogenous = Matrix(6, 1);
  spec.supplied_exogenous << 1, 2, 3, 4, 5, 6;
  const auto ds = generate(spec);
  CHECK(ds.observations().col(1) == spec.supplied_exogenous.bottomRows(4));
  for (Eigen::Index t = 1; t < 4; ++t)
    CHECK(ds.observations()(t, 0) ==
          doctest::Approx(0.2 * ds.observations()(t - 1, 0) + ds.observations()(t - 1, 1)));
}

TEST_CASE("noiseless round trip over the seeded corpus") {
  for (const auto& spec : varsel::testing::recovery_corpus()) {
    const auto ds = generate(spec);
    const auto cfg = varsel::testing::true_config(spec, ds);
    const auto f = fit(ds, cfg);
    CHECK(relative_error(f.theta, flatten_coefficients(spec.true_coefficients)) <= 1e-8);
  }
}

TEST_CASE("coefficient error shrinks with the noise") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double noise : {0.1, 0.01, 0.001}) {
      const auto ds = varsel::testing::noisy_var2(seed, 400, noise);
      const auto f = fit(ds, make_config(ds, 2, 0));
      const double err =
          relative_error(f.theta, flatten_coefficients(varsel::testing::noisy_var2_truth()));
      CHECK(err < previous);
      previous = err;
    }
  }
}

TEST_CASE("forecast of a unit-step recurrence") {
  const auto ds = univariate({1, 2, 3, 4});
  const auto f = fit(ds, make_config(ds, 1, 0));
  const Matrix h = forecast(ds, f, 3);
  REQUIRE(h.rows() == 3);
  CHECK(h(0, 0) == doctest::Approx(5.0));
  CHECK(h(1, 0) == doctest::Approx(6.0));
  CHECK(h(2, 0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(forecast(ds, f, 0), DataError);
}

TEST_CASE("one-step forecast equals the last design row times theta") {
  GeneratorSpec spec;
  spec.true_coefficients = random_stable_coefficients(5, 2, 2, 1, 2, true, 0.6);
  spec.noise_scale = 0.3;
  spec.exogenous = ExogenousKind::RandomWalk;
  spec.seed = 5;
  const auto ds = generate(spec);
  const auto cfg = make_config(ds, 2, 2);
  const auto f = fit(ds, cfg);

  // Append a dummy row so the design's last row holds the lags of time T.
  Matrix extended(ds.length() + 1, ds.width());
  extended.topRows(ds.length()) = ds.observations();
  extended.row(ds.length()).setZero();
  const TimeSeriesDataset ext(extended, ds.names(), ds.roles());
  const auto sys = build_regression_system(ext, cfg);
  const RowVector expected = sys.X.bottomRows(1) * f.theta;
  const Matrix got = forecast(ds, f, 1);
  CHECK(relative_error(got, expected) <= 1e-12);

  CHECK_THROWS_AS(forecast(ds, f, 3), DataError);
  const Matrix z = Matrix::Zero(3, 1);
  CHECK(forecast(ds, f, 3, z).rows() == 3);
}

TEST_CASE("stable forecasts converge to the fixed point") {
  const auto ds = varsel::testing::noisy_var2(9, 300, 0.2);
  const auto f = fit(ds, make_config(ds, 2, 0));
  Matrix sum_a = Matrix::Zero(2, 2);
  for (const auto& a : f.coefficients.A) sum_a += a;
  const RowVector fixed = *f.coefficients.C * (Matrix::Identity(2, 2) - sum_a).inverse();
  const Matrix h = forecast(ds, f, 200);
  CHECK(relative_error(h.bottomRows(1), fixed) <= 1e-10);
  const double early = (h.row(0) - fixed).norm();
  const double late = (h.row(20) - fixed).norm();
  CHECK(late < early);
}
