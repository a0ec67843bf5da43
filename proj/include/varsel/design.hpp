#pragma once

#include <optional>

#include "varsel/model.hpp"

namespace varsel {

// Stacked least-squares system Y ~ X Theta.
//
// Target rows are dataset rows row_start .. T-1 restricted to the dependent
// columns. Design columns come in blocks: y-lags 1..p, then z-lags 1..q, then
// the constant. Within a block columns follow dataset order.
struct RegressionSystem {
  Matrix Y;  // T' x n
  Matrix X;  // T' x K
  std::size_t row_start = 0;
};

// Throws InvalidConfig when the configuration is structurally invalid for the
// dataset at the requested row start (default max(p, q)). The system may be
// square or wide; least squares checks determinacy itself.
RegressionSystem build_regression_system(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                         std::optional<std::size_t> row_start = std::nullopt);

}  // namespace varsel
