#pragma once

#include <cstdint>
#include <optional>

#include "varsel/model.hpp"

namespace varsel {

// Largest eigenvalue modulus of the companion matrix built from the A blocks.
// Below 1 means the process is stable. Throws ConvergenceError when the
// eigenvalue iteration fails.
double companion_spectral_radius(const CoefficientSet& coeffs);

enum class ExogenousKind { None, RandomWalk, Supplied };

struct GeneratorSpec {
  CoefficientSet true_coefficients;
  double noise_scale = 0.0;  // std. deviation of i.i.d. Gaussian innovations
  ExogenousKind exogenous = ExogenousKind::None;
  // Width of the exogenous block when B is empty (q = 0) but z columns are
  // still wanted in the output. Ignored when B is non-empty.
  std::size_t exogenous_dim = 0;
  // For ExogenousKind::Supplied: (burn_in + T) x d series.
  Matrix supplied_exogenous;
  // Rows forced at the very start of the simulation (before burn-in). Lags
  // reaching before row 0 read as zero.
  std::optional<Matrix> initial_values;
  std::size_t T = 100;
  std::size_t burn_in = 100;
  std::uint64_t seed = 0;
};

inline constexpr double kStabilityMargin = 0.999;

// Simulates the recurrence and returns the last T rows. Columns are y1..yn
// (Dependent) followed by z1..zd (Independent). Throws Unstable when the
// process has noise and a spectral radius at or above kStabilityMargin.
TimeSeriesDataset generate(const GeneratorSpec& spec);

// Random coefficients whose companion spectral radius equals target_radius.
CoefficientSet random_stable_coefficients(std::uint64_t seed, std::size_t n, std::size_t p,
                                          std::size_t d, std::size_t q, bool include_constant,
                                          double target_radius);

// Iterates the fitted recurrence past the end of ds. future_z holds
// exogenous rows for times T, T+1, ...; it is required when the model uses
// exogenous lags and horizon >= 2.
Matrix forecast(const TimeSeriesDataset& ds, const FitResult& fit, std::size_t horizon,
                const std::optional<Matrix>& future_z = std::nullopt);

}  // namespace varsel
