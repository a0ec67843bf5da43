#include "varsel/model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace varsel {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out << sep;
    out << parts[i];
  }
  return out.str();
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> violations)
    : Error("invalid model configuration: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

RankDeficient::RankDeficient(std::size_t rank, std::size_t columns)
    : Error("design matrix is rank deficient (rank " + std::to_string(rank) + " of " +
            std::to_string(columns) + " columns)"),
      rank_(rank),
      columns_(columns) {}

Unstable::Unstable(double radius)
    : Error("process is not stable (companion spectral radius " + std::to_string(radius) + ")"),
      radius_(radius) {}

TimeSeriesDataset::TimeSeriesDataset(Matrix observations, std::vector<std::string> names,
                                     std::vector<Role> roles)
    : observations_(std::move(observations)), names_(std::move(names)), roles_(std::move(roles)) {
  if (observations_.rows() < 1 || observations_.cols() < 1)
    throw DataError("dataset needs at least one row and one column");
  if (names_.size() != width() || roles_.size() != width())
    throw DataError("dataset has " + std::to_string(width()) + " columns but " +
                    std::to_string(names_.size()) + " names and " + std::to_string(roles_.size()) +
                    " roles");
  if (!observations_.allFinite()) throw DataError("dataset contains non-finite values");

  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) throw DataError("empty variable name");
    if (!seen.insert(name).second) throw DataError("duplicate variable name '" + name + "'");
  }
  if (std::none_of(roles_.begin(), roles_.end(), [](Role r) { return r == Role::Dependent; }))
    throw DataError("dataset has no dependent column");
}

std::vector<bool> TimeSeriesDataset::default_mask() const {
  std::vector<bool> mask(width());
  for (std::size_t i = 0; i < width(); ++i) mask[i] = roles_[i] == Role::Dependent;
  return mask;
}

std::size_t ModelConfig::n_dependent() const noexcept {
  return static_cast<std::size_t>(std::count(dependent_mask.begin(), dependent_mask.end(), true));
}

std::size_t ModelConfig::n_independent() const noexcept {
  return dependent_mask.size() - n_dependent();
}

std::vector<std::size_t> ModelConfig::dependent_columns() const {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < dependent_mask.size(); ++i)
    if (dependent_mask[i]) cols.push_back(i);
  return cols;
}

std::vector<std::size_t> ModelConfig::independent_columns() const {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < dependent_mask.size(); ++i)
    if (!dependent_mask[i]) cols.push_back(i);
  return cols;
}

std::size_t ModelConfig::regressor_count() const noexcept {
  return n_dependent() * p + n_independent() * q + (include_constant ? 1 : 0);
}

ModelConfig make_config(const TimeSeriesDataset& ds, std::size_t p, std::size_t q,
                        bool include_constant) {
  return ModelConfig{p, q, ds.default_mask(), include_constant};
}

std::size_t CoefficientSet::scalar_count() const {
  std::size_t total = C ? static_cast<std::size_t>(C->size()) : 0;
  for (const auto& a : A) total += static_cast<std::size_t>(a.size());
  for (const auto& b : B) total += static_cast<std::size_t>(b.size());
  return total;
}

std::vector<std::string> validate_structure(const ModelConfig& cfg, const TimeSeriesDataset& ds,
                                            std::optional<std::size_t> row_start) {
  std::vector<std::string> violations;
  if (cfg.p < 1) violations.emplace_back("p must be >= 1");
  if (cfg.dependent_mask.size() != ds.width()) {
    violations.emplace_back("dependent mask has " + std::to_string(cfg.dependent_mask.size()) +
                            " entries but dataset has " + std::to_string(ds.width()) + " columns");
    return violations;
  }
  if (cfg.n_dependent() == 0) violations.emplace_back("dependent mask selects no column");

  const std::size_t start = row_start.value_or(cfg.max_lag());
  if (start < cfg.max_lag())
    violations.emplace_back("row start " + std::to_string(start) + " is before the largest lag " +
                            std::to_string(cfg.max_lag()));
  if (start >= ds.length())
    violations.emplace_back("insufficient effective sample: no target rows after row " +
                            std::to_string(start));
  return violations;
}

std::vector<std::string> validate_config(const ModelConfig& cfg, const TimeSeriesDataset& ds,
                                         std::optional<std::size_t> row_start) {
  auto violations = validate_structure(cfg, ds, row_start);
  if (cfg.dependent_mask.size() != ds.width()) return violations;
  const std::size_t start = row_start.value_or(cfg.max_lag());
  const std::size_t columns = cfg.regressor_count();
  const std::size_t rows = ds.length() > start ? ds.length() - start : 0;
  if (rows >= 1 && rows < columns + 1)
    violations.emplace_back("insufficient effective sample: " + std::to_string(rows) +
                            " rows for " + std::to_string(columns) + " regressors");
  return violations;
}

std::size_t count_parameters(const ModelConfig& cfg, const TimeSeriesDataset& ds) {
  auto violations = validate_config(cfg, ds);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  return cfg.n_dependent() * cfg.regressor_count();
}

}  // namespace varsel
