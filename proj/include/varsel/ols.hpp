#pragma once

#include <optional>

#include "varsel/criteria.hpp"
#include "varsel/design.hpp"
#include "varsel/model.hpp"

namespace varsel {

// Ratio |R_kk| / |R_00| of the column-pivoted QR below which a column counts
// as linearly dependent.
inline constexpr double kRankTolerance = 1e-10;

// Residual variance, relative to the mean square of the targets, below which
// the residual covariance is treated as singular (an exact fit).
inline constexpr double kDegenerateVarianceRatio = 1e-20;

// Least-squares coefficients for all equations at once: one column-pivoted
// Householder QR of X serves every column of Y. Throws RankDeficient.
Matrix solve_least_squares(const RegressionSystem& sys);

// Splits stacked K x n coefficients into A_1..A_p, B_1..B_q, C.
CoefficientSet unflatten_coefficients(const Matrix& theta, const ModelConfig& cfg,
                                      const TimeSeriesDataset& ds);
Matrix flatten_coefficients(const CoefficientSet& coeffs);

struct ResidualCovariance {
  Matrix residuals;  // Y - X theta
  Matrix sigma;      // residuals^T residuals / T'
};

ResidualCovariance residual_covariance(const RegressionSystem& sys, const Matrix& theta);

// ln det(sigma) with the singular cutoff scaled to the targets of sys.
double residual_log_det(const RegressionSystem& sys, const Matrix& sigma);

// OLS fit scored with every criterion. row_start defaults to max(p, q).
// Throws InvalidConfig or RankDeficient.
FitResult fit(const TimeSeriesDataset& ds, const ModelConfig& cfg,
              std::optional<std::size_t> row_start = std::nullopt);

}  // namespace varsel
