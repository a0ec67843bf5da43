#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "varsel/criteria.hpp"

using namespace varsel;

// Values from direct evaluation of the penalty formulas (independent python
// check): 2*2/100, 2*ln(100)/100, 2*2*ln(ln(100))/100.
constexpr double kAic = 0.04;
constexpr double kBic = 0.09210340371976183;
constexpr double kHqc = 0.06108718503231605;

TEST_CASE("log det examples") {
  CHECK(log_det_cov(Matrix::Identity(3, 3)) == doctest::Approx(0.0));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 3;
  CHECK(log_det_cov(d) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(log_det_cov(Matrix::Zero(2, 2)) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log det rejects bad input") {
  Matrix asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(log_det_cov(asym), DataError);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(log_det_cov(nan), DataError);
}

TEST_CASE("log det of a singular rank-one covariance") {
  Matrix v(2, 1);
  v << 1, 2;
  CHECK(log_det_cov(v * v.transpose()) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("criterion values for sigma = I, 2 parameters, T' = 100") {
  const Matrix I = Matrix::Identity(2, 2);
  CHECK(std::abs(evaluate_criterion(CriterionKind::AIC, I, 2, 100) - kAic) <= 1e-12);
  CHECK(std::abs(evaluate_criterion(CriterionKind::BIC, I, 2, 100) - kBic) <= 1e-12);
  CHECK(std::abs(evaluate_criterion(CriterionKind::HQC, I, 2, 100) - kHqc) <= 1e-12);
}

TEST_CASE("HQC is undefined for T' <= e") {
  const Matrix I = Matrix::Identity(1, 1);
  CHECK_THROWS_AS(evaluate_criterion(CriterionKind::HQC, I, 1, 1), HqcUndefined);
  CHECK_THROWS_AS(evaluate_criterion(CriterionKind::HQC, I, 1, 2), HqcUndefined);
  CHECK_NOTHROW(evaluate_criterion(CriterionKind::HQC, I, 1, 3));
  CHECK_THROWS_AS(evaluate_criterion(CriterionKind::AIC, I, 1, 0), DataError);
}

TEST_CASE("penalty ordering AIC < HQC < BIC for T' >= 16") {
  Matrix sigma(2, 2);
  sigma << 1.5, 0.2, 0.2, 0.7;
  for (std::size_t t = 16; t <= 10000; t += 37) {
    for (std::size_t k : {1u, 5u, 40u}) {
      const double aic = evaluate_criterion(CriterionKind::AIC, sigma, k, t);
      const double hqc = evaluate_criterion(CriterionKind::HQC, sigma, k, t);
      const double bic = evaluate_criterion(CriterionKind::BIC, sigma, k, t);
      CHECK(aic < hqc);
      CHECK(hqc < bic);
    }
  }
}

TEST_CASE("criteria increase strictly with the parameter count") {
  const Matrix sigma = 0.3 * Matrix::Identity(3, 3);
  for (auto kind : kAllCriteria)
    for (std::size_t k = 0; k < 50; ++k)
      CHECK(evaluate_criterion(kind, sigma, k, 200) < evaluate_criterion(kind, sigma, k + 1, 200));
}

TEST_CASE("uniform residual scaling shifts every criterion by 2n ln s") {
  Matrix sigma(3, 3);
  sigma << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5;
  for (double s : {0.1, 2.0, 7.5})
    for (auto kind : kAllCriteria) {
      const double shifted = evaluate_criterion(kind, s * s * sigma, 12, 80);
      const double base = evaluate_criterion(kind, sigma, 12, 80);
      CHECK(shifted - base == doctest::Approx(2.0 * 3.0 * std::log(s)).epsilon(1e-12));
    }
}

TEST_CASE("criterion names round-trip") {
  for (auto kind : kAllCriteria) CHECK(parse_criterion(to_string(kind)) == kind);
  CHECK_FALSE(parse_criterion("fpe").has_value());
}
