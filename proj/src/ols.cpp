#include "varsel/ols.hpp"

#include <cmath>

namespace varsel {

Matrix solve_least_squares(const RegressionSystem& sys) {
  const Matrix& X = sys.X;
  if (X.rows() != sys.Y.rows())
    throw DimensionMismatch("design and target matrices have different row counts");
  if (X.rows() <= X.cols())
    throw DimensionMismatch("least squares needs more rows than columns (" +
                            std::to_string(X.rows()) + " x " + std::to_string(X.cols()) + ")");

  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  const auto& R = qr.matrixR();
  const double lead = std::abs(R(0, 0));
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < X.cols(); ++k)
    if (lead > 0.0 && std::abs(R(k, k)) >= kRankTolerance * lead) ++rank;
  if (rank < static_cast<std::size_t>(X.cols()))
    throw RankDeficient(rank, static_cast<std::size_t>(X.cols()));

  return qr.solve(sys.Y);
}

CoefficientSet unflatten_coefficients(const Matrix& theta, const ModelConfig& cfg,
                                      const TimeSeriesDataset& ds) {
  if (cfg.dependent_mask.size() != ds.width())
    throw DimensionMismatch("configuration mask does not match dataset width");
  const auto n = static_cast<Eigen::Index>(cfg.n_dependent());
  const auto d = static_cast<Eigen::Index>(cfg.n_independent());
  const auto K = static_cast<Eigen::Index>(cfg.regressor_count());
  if (theta.rows() != K || theta.cols() != n)
    throw DimensionMismatch("coefficient matrix is " + std::to_string(theta.rows()) + " x " +
                            std::to_string(theta.cols()) + ", expected " + std::to_string(K) +
                            " x " + std::to_string(n));

  CoefficientSet out;
  Eigen::Index row = 0;
  for (std::size_t lag = 0; lag < cfg.p; ++lag, row += n) out.A.push_back(theta.middleRows(row, n));
  for (std::size_t lag = 0; lag < cfg.q; ++lag, row += d) out.B.push_back(theta.middleRows(row, d));
  if (cfg.include_constant) out.C = theta.row(row);
  return out;
}

Matrix flatten_coefficients(const CoefficientSet& coeffs) {
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  auto visit = [&](const Matrix& m) {
    if (cols < 0) cols = m.cols();
    if (m.cols() != cols) throw DimensionMismatch("coefficient blocks disagree on equation count");
    rows += m.rows();
  };
  for (const auto& a : coeffs.A) visit(a);
  for (const auto& b : coeffs.B) visit(b);
  if (coeffs.C) visit(*coeffs.C);
  if (cols < 0) return {};

  Matrix theta(rows, cols);
  Eigen::Index row = 0;
  for (const auto& a : coeffs.A) { theta.middleRows(row, a.rows()) = a; row += a.rows(); }
  for (const auto& b : coeffs.B) { theta.middleRows(row, b.rows()) = b; row += b.rows(); }
  if (coeffs.C) theta.row(row) = *coeffs.C;
  return theta;
}

ResidualCovariance residual_covariance(const RegressionSystem& sys, const Matrix& theta) {
  if (theta.rows() != sys.X.cols() || theta.cols() != sys.Y.cols())
    throw DimensionMismatch("coefficient matrix does not match the regression system");
  ResidualCovariance out;
  out.residuals = sys.Y - sys.X * theta;
  const Matrix cross = out.residuals.transpose() * out.residuals;
  out.sigma = 0.5 * (cross + cross.transpose()) / static_cast<double>(sys.Y.rows());
  return out;
}

double residual_log_det(const RegressionSystem& sys, const Matrix& sigma) {
  const double target_scale =
      (sys.Y.colwise().squaredNorm() / static_cast<double>(sys.Y.rows())).maxCoeff();
  return log_det_cov(sigma, kDegenerateVarianceRatio * target_scale);
}

FitResult fit(const TimeSeriesDataset& ds, const ModelConfig& cfg,
              std::optional<std::size_t> row_start) {
  auto violations = validate_config(cfg, ds, row_start);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  const RegressionSystem sys = build_regression_system(ds, cfg, row_start);
  FitResult out;
  out.config = cfg;
  out.theta = solve_least_squares(sys);
  out.coefficients = unflatten_coefficients(out.theta, cfg, ds);
  auto rc = residual_covariance(sys, out.theta);
  out.residuals = std::move(rc.residuals);
  out.sigma = std::move(rc.sigma);
  out.effective_T = static_cast<std::size_t>(sys.Y.rows());
  out.row_start = sys.row_start;
  out.n_params = static_cast<std::size_t>(out.theta.size());

  const double log_det = residual_log_det(sys, out.sigma);
  out.degenerate = std::isinf(log_det);
  for (auto kind : kAllCriteria) {
    try {
      out.criterion_values[kind] =
          criterion_from_log_det(kind, log_det, out.n_params, out.effective_T);
    } catch (const HqcUndefined&) {
    }
  }
  return out;
}

}  // namespace varsel
