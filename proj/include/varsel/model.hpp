#pragma once

// Domain types shared by every module.
//
// Orientation: an observation y(j) is a row vector and lag matrices act on
// the right, so one equation of the system reads
//
//   y(j) ~ y(j-1) A_1 + ... + y(j-p) A_p + z(j-1) B_1 + ... + z(j-q) B_q + C
//
// with A_t of shape n x n, B_t of shape d x n and C of shape 1 x n.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varsel/error.hpp"

namespace varsel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

enum class Role { Dependent, Independent };

// Observed multivariate series. Rows are time points in increasing order.
class TimeSeriesDataset {
 public:
  // Throws DataError when an invariant is violated.
  TimeSeriesDataset(Matrix observations, std::vector<std::string> names, std::vector<Role> roles);

  const Matrix& observations() const noexcept { return observations_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Role>& roles() const noexcept { return roles_; }

  std::size_t length() const noexcept { return static_cast<std::size_t>(observations_.rows()); }
  std::size_t width() const noexcept { return static_cast<std::size_t>(observations_.cols()); }

  // Mask with true for every column whose role is Dependent.
  std::vector<bool> default_mask() const;

 private:
  Matrix observations_;
  std::vector<std::string> names_;
  std::vector<Role> roles_;
};

struct ModelConfig {
  std::size_t p = 1;  // endogenous lag order
  std::size_t q = 0;  // exogenous lag order
  std::vector<bool> dependent_mask;
  bool include_constant = true;

  std::size_t max_lag() const noexcept { return p > q ? p : q; }
  std::size_t n_dependent() const noexcept;
  std::size_t n_independent() const noexcept;
  std::vector<std::size_t> dependent_columns() const;
  std::vector<std::size_t> independent_columns() const;
  // Number of design-matrix columns K = n*p + d*q + c.
  std::size_t regressor_count() const noexcept;

  bool operator==(const ModelConfig&) const = default;
};

// Default configuration for a dataset: its own role partition, constant on.
ModelConfig make_config(const TimeSeriesDataset& ds, std::size_t p, std::size_t q,
                        bool include_constant = true);

struct CoefficientSet {
  std::vector<Matrix> A;        // p matrices, n x n
  std::vector<Matrix> B;        // q matrices, d x n
  std::optional<RowVector> C;   // 1 x n when the constant is included

  std::size_t scalar_count() const;
};

enum class CriterionKind { AIC, BIC, HQC };

struct FitResult {
  ModelConfig config;
  CoefficientSet coefficients;
  Matrix theta;          // K x n stacked coefficients in design-column order
  Matrix residuals;      // T' x n
  Matrix sigma;          // n x n, divisor T'
  std::map<CriterionKind, double> criterion_values;  // HQC absent when undefined
  std::size_t n_params = 0;
  std::size_t effective_T = 0;
  std::size_t row_start = 0;  // first dataset row used as a target
  bool degenerate = false;    // singular residual covariance
};

// Structural checks only: mask width, p >= 1, a dependent column, and at
// least one target row after row_start. Enough to build the regression system.
std::vector<std::string> validate_structure(const ModelConfig& cfg, const TimeSeriesDataset& ds,
                                            std::optional<std::size_t> row_start = std::nullopt);

// Structural checks plus T' >= K + 1, so least squares is determined.
// Empty result means the configuration is valid for the dataset.
// row_start overrides the first target row (defaults to max(p, q)).
std::vector<std::string> validate_config(const ModelConfig& cfg, const TimeSeriesDataset& ds,
                                         std::optional<std::size_t> row_start = std::nullopt);

// n * (n*p + d*q + c). Throws InvalidConfig.
std::size_t count_parameters(const ModelConfig& cfg, const TimeSeriesDataset& ds);

}  // namespace varsel
