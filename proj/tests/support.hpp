#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "varsel/model.hpp"
#include "varsel/ols.hpp"
#include "varsel/synthesis.hpp"

namespace varsel::testing {

inline TimeSeriesDataset univariate(const std::vector<double>& values) {
  Matrix obs(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) obs(static_cast<Eigen::Index>(i), 0) = values[i];
  return TimeSeriesDataset(std::move(obs), {"y"}, {Role::Dependent});
}

inline TimeSeriesDataset with_roles(const Matrix& obs, std::vector<std::string> names,
                                    std::vector<Role> roles) {
  return TimeSeriesDataset(obs, std::move(names), std::move(roles));
}

inline double relative_error(const Matrix& got, const Matrix& want) {
  const double scale = want.norm();
  return (got - want).norm() / (scale > 0.0 ? scale : 1.0);
}

// Coefficients of the monic polynomial prod (x - r_i), highest power first
// omitted: returns a_1..a_p with x^p - a_1 x^{p-1} - ... - a_p.
inline std::vector<double> ar_from_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= r * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<double> a;
  for (std::size_t i = 1; i < poly.size(); ++i) a.push_back(-poly[i].real());
  return a;
}

// Noiseless generator spec whose data excite every regressor direction, so a
// fit with the true configuration is well conditioned.
//
// Without exogenous inputs each variable follows its own AR(p) with roots of
// modulus near 0.997 (slow decay keeps every mode visible over T = 500), then
// the variables are mixed by a random similarity. With exogenous inputs the
// dynamics are a random stable draw driven by a Gaussian random walk.
inline GeneratorSpec recovery_spec(std::uint64_t seed, std::size_t n, std::size_t p,
                                   bool exogenous, bool constant, std::size_t T = 500) {
  GeneratorSpec spec;
  spec.T = T;
  spec.burn_in = 0;
  spec.seed = seed;
  spec.noise_scale = 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  if (exogenous) {
    const std::size_t d = 1 + seed % 2;
    const std::size_t q = 1 + seed % 2;
    spec.true_coefficients = random_stable_coefficients(seed, n, p, d, q, constant, 0.8);
    spec.exogenous = ExogenousKind::RandomWalk;
    Matrix init(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < init.size(); ++i) init(i) = unit(rng);
    spec.initial_values = init;
    return spec;
  }

  const auto nn = static_cast<Eigen::Index>(n);
  std::vector<Matrix> diag(p, Matrix::Zero(nn, nn));
  double angle = 0.35 + 0.1 * std::abs(unit(rng));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::complex<double>> roots;
    while (roots.size() + 2 <= p) {
      const double radius = 0.996 + 0.002 * std::abs(unit(rng));
      roots.push_back(std::polar(radius, angle));
      roots.push_back(std::polar(radius, -angle));
      angle += 0.55 + 0.1 * std::abs(unit(rng));
    }
    if (roots.size() < p) roots.push_back(i % 2 == 0 ? -0.997 + 0.001 * static_cast<double>(i) : 0.994);
    const auto a = ar_from_roots(roots);
    for (std::size_t t = 0; t < p; ++t) diag[t](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = a[t];
  }

  Matrix S = Matrix::Identity(nn, nn);
  for (Eigen::Index i = 0; i < S.size(); ++i) S(i) += 0.3 * unit(rng);
  const Matrix S_inv = S.inverse();
  CoefficientSet c;
  for (auto& m : diag) c.A.push_back(S_inv * m * S);
  if (constant) {
    c.C = RowVector(nn);
    for (Eigen::Index i = 0; i < nn; ++i) c.C->operator()(i) = unit(rng);
  }
  spec.true_coefficients = std::move(c);
  Matrix init(static_cast<Eigen::Index>(p), nn);
  for (Eigen::Index i = 0; i < init.size(); ++i) init(i) = unit(rng);
  spec.initial_values = init;
  return spec;
}

// The true configuration for a recovery spec's generated dataset.
inline ModelConfig true_config(const GeneratorSpec& spec, const TimeSeriesDataset& ds) {
  const auto& c = spec.true_coefficients;
  return ModelConfig{c.A.size(), c.B.size(), ds.default_mask(), c.C.has_value()};
}

// Twenty recovery specs spanning n in {1,2,3}, p in {1,2,3}, with and
// without exogenous inputs and constant.
inline std::vector<GeneratorSpec> recovery_corpus() {
  std::vector<GeneratorSpec> out;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 1 + s % 3;
    const std::size_t p = 1 + (s / 3) % 3;
    const bool exog = (s / 2) % 2 == 1;
    const bool constant = s % 4 != 3;
    out.push_back(recovery_spec(1000 + s, n, p, exog, constant));
  }
  return out;
}

// Stable bivariate VAR(2) with Gaussian noise.
inline CoefficientSet noisy_var2_truth() {
  CoefficientSet c;
  Matrix a1(2, 2), a2(2, 2);
  a1 << 0.5, 0.1, 0.2, 0.4;
  a2 << -0.3, 0.1, 0.05, -0.25;
  c.A = {a1, a2};
  c.C = RowVector::Constant(2, 0.5);
  return c;
}

inline TimeSeriesDataset noisy_var2(std::uint64_t seed, std::size_t T, double noise) {
  GeneratorSpec spec;
  spec.true_coefficients = noisy_var2_truth();
  spec.noise_scale = noise;
  spec.T = T;
  spec.seed = seed;
  return generate(spec);
}

// Stable univariate AR(1): y_t = 0.6 y_{t-1} + 1 + noise.
inline TimeSeriesDataset noisy_ar1(std::uint64_t seed, std::size_t T, double noise) {
  GeneratorSpec spec;
  CoefficientSet c;
  c.A = {Matrix::Constant(1, 1, 0.6)};
  c.C = RowVector::Constant(1, 1.0);
  spec.true_coefficients = c;
  spec.noise_scale = noise;
  spec.T = T;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace varsel::testing
