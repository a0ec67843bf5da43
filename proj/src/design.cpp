#include "varsel/design.hpp"

namespace varsel {

RegressionSystem build_regression_system(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                         std::optional<std::size_t> row_start) {
  auto violations = validate_structure(cfg, ds, row_start);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));

  const std::size_t start = row_start.value_or(cfg.max_lag());
  const auto rows = static_cast<Eigen::Index>(ds.length() - start);
  const auto dep = cfg.dependent_columns();
  const auto indep = cfg.independent_columns();
  const auto n = static_cast<Eigen::Index>(dep.size());
  const auto d = static_cast<Eigen::Index>(indep.size());
  const Matrix& obs = ds.observations();

  RegressionSystem sys;
  sys.row_start = start;
  sys.Y.resize(rows, n);
  sys.X.resize(rows, static_cast<Eigen::Index>(cfg.regressor_count()));

  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto t = static_cast<Eigen::Index>(start) + r;
    for (Eigen::Index i = 0; i < n; ++i) sys.Y(r, i) = obs(t, static_cast<Eigen::Index>(dep[i]));

    Eigen::Index col = 0;
    for (std::size_t lag = 1; lag <= cfg.p; ++lag)
      for (Eigen::Index i = 0; i < n; ++i)
        sys.X(r, col++) = obs(t - static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(dep[i]));
    for (std::size_t lag = 1; lag <= cfg.q; ++lag)
      for (Eigen::Index i = 0; i < d; ++i)
        sys.X(r, col++) =
            obs(t - static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(indep[i]));
    if (cfg.include_constant) sys.X(r, col++) = 1.0;
  }
  return sys;
}

}  // namespace varsel
