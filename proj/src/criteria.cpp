#include "varsel/criteria.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace varsel {

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AIC:
      return "aic";
    case CriterionKind::BIC:
      return "bic";
    case CriterionKind::HQC:
      return "hqc";
  }
  return "?";
}

std::optional<CriterionKind> parse_criterion(std::string_view text) {
  for (auto kind : kAllCriteria)
    if (to_string(kind) == text) return kind;
  return std::nullopt;
}

double log_det_cov(const Matrix& sigma, double singular_floor) {
  if (sigma.rows() != sigma.cols()) throw DataError("covariance matrix is not square");
  if (sigma.size() == 0) throw DataError("covariance matrix is empty");
  if (!sigma.allFinite()) throw DataError("covariance matrix has non-finite entries");

  const double scale = sigma.cwiseAbs().maxCoeff();
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw DataError("covariance matrix is not symmetric");

  const double max_diag = sigma.diagonal().cwiseAbs().maxCoeff();
  const double tol = std::max(static_cast<double>(sigma.rows()) *
                                  std::numeric_limits<double>::epsilon() * max_diag,
                              singular_floor);

  Eigen::LDLT<Matrix> ldlt(sigma);
  double total = 0.0;
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    const double pivot = ldlt.vectorD()(i);
    if (!(pivot > tol)) return -std::numeric_limits<double>::infinity();
    total += std::log(pivot);
  }
  return total;
}

double penalty_factor(CriterionKind kind, std::size_t effective_T) {
  if (effective_T < 1) throw DataError("effective sample size must be positive");
  const double t = static_cast<double>(effective_T);
  switch (kind) {
    case CriterionKind::AIC:
      return 2.0;
    case CriterionKind::BIC:
      return std::log(t);
    case CriterionKind::HQC:
      if (t <= std::numbers::e)
        throw HqcUndefined("HQC needs an effective sample larger than e, got " +
                           std::to_string(effective_T));
      return 2.0 * std::log(std::log(t));
  }
  throw DataError("unknown criterion");
}

double criterion_from_log_det(CriterionKind kind, double log_det, std::size_t n_params,
                              std::size_t effective_T) {
  const double penalty = penalty_factor(kind, effective_T);
  return log_det + penalty * static_cast<double>(n_params) / static_cast<double>(effective_T);
}

double evaluate_criterion(CriterionKind kind, const Matrix& sigma, std::size_t n_params,
                          std::size_t effective_T) {
  return criterion_from_log_det(kind, log_det_cov(sigma), n_params, effective_T);
}

}  // namespace varsel
