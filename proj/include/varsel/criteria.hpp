#pragma once

// Information criteria in their multivariate VAR form:
//
//   value = ln det(Sigma) + penalty * n_params / T'
//
// with Sigma the residual covariance using divisor T' and
//   AIC: penalty = 2
//   BIC: penalty = ln T'
//   HQC: penalty = 2 ln ln T'
//
// Lower is better. A singular Sigma gives ln det = -infinity, so the value
// is -infinity (a perfect fit).

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "varsel/model.hpp"

namespace varsel {

inline constexpr std::array<CriterionKind, 3> kAllCriteria = {CriterionKind::AIC,
                                                              CriterionKind::BIC,
                                                              CriterionKind::HQC};

std::string_view to_string(CriterionKind kind);
std::optional<CriterionKind> parse_criterion(std::string_view text);

// ln det(sigma) by pivoted LDL^T. A pivot at or below
// max(n * eps * max|diag|, singular_floor) marks the matrix singular and the
// result is -infinity. Throws DataError for asymmetric or non-finite input.
double log_det_cov(const Matrix& sigma, double singular_floor = 0.0);

// Penalty factor multiplying n_params / effective_T.
// Throws HqcUndefined for HQC when effective_T <= e.
double penalty_factor(CriterionKind kind, std::size_t effective_T);

double criterion_from_log_det(CriterionKind kind, double log_det, std::size_t n_params,
                              std::size_t effective_T);

double evaluate_criterion(CriterionKind kind, const Matrix& sigma, std::size_t n_params,
                          std::size_t effective_T);

}  // namespace varsel
