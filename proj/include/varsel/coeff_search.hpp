#pragma once

// Direct minimization of an information criterion over coefficient space for
// a fixed configuration, and comparison of the result against OLS.
//
// With the configuration fixed, the penalty term is constant, so the search
// effectively minimizes ln det(Sigma). OLS is the exact minimizer of that
// quantity for this system; the comparison report therefore measures how
// close each metaheuristic gets (gap >= 0 up to rounding).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "varsel/config_search.hpp"
#include "varsel/design.hpp"
#include "varsel/model.hpp"

namespace varsel {

enum class CoeffMethod { GA, Tabu, GRASP, Scatter, Hybrid };

std::string_view to_string(CoeffMethod method);
std::optional<CoeffMethod> parse_coeff_method(std::string_view text);

// Candidate coefficients: the K x n stacked matrix flattened row by row, so
// entry k*n + i is coefficient k of equation i.
struct CoefficientGenome {
  ModelConfig config;
  Vector theta;
};

Vector flatten_theta(const Matrix& theta);
Matrix unflatten_theta(const Vector& flat, std::size_t equations);

// Fitness evaluator for one configuration. The regression system is built
// once at construction.
class CoefficientObjective {
 public:
  CoefficientObjective(const TimeSeriesDataset& ds, const ModelConfig& cfg, CriterionKind kind,
                       std::optional<std::size_t> row_start = std::nullopt);

  // +infinity for non-finite theta or a wrong length.
  double operator()(const Vector& theta) const;
  double value(CriterionKind kind, const Vector& theta) const;

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t equations() const noexcept { return static_cast<std::size_t>(sys_.Y.cols()); }
  const RegressionSystem& system() const noexcept { return sys_; }
  const ModelConfig& config() const noexcept { return cfg_; }
  CriterionKind kind() const noexcept { return kind_; }

  // Per-coordinate scale: largest target column norm over the norm of the
  // coordinate's design column.
  const Vector& coordinate_scale() const noexcept { return scale_; }
  // Half-width r of the initialization box [-r, r]:
  // 3 * (max column norm of Y) / (max column norm of X).
  double init_radius() const noexcept { return radius_; }

 private:
  RegressionSystem sys_;
  ModelConfig cfg_;
  CriterionKind kind_;
  std::size_t dimension_;
  Vector scale_;
  double radius_;
};

double coefficient_fitness(const TimeSeriesDataset& ds, const CoefficientGenome& genome,
                           CriterionKind kind, std::size_t common_row_start);

struct CoeffSearchParams {
  // GA
  std::size_t population_size = 50;
  double crossover_rate = 0.9;
  double mutation_rate = 0.0;  // 0 selects 1 / dimension
  // Gaussian mutation / neighborhood step, as a multiple of the coordinate scale.
  double mutation_scale = 0.1;
  // Tabu
  std::size_t tabu_tenure = 7;
  // GRASP
  double alpha = 0.3;
  std::size_t line_points = 11;
  // Scatter Search
  std::size_t ref_set_size = 10;
  std::size_t improvement_evaluations = 0;  // 0 selects 20 * dimension
  // Hybrid
  double construction_share = 0.3;
  // Seed the initial population with the OLS solution.
  bool warm_start_ols = false;
};

struct CoeffSearchResult {
  CoeffMethod method = CoeffMethod::GA;
  CoefficientSet coefficients;
  Vector theta;
  double value = 0.0;
  std::size_t evaluations_used = 0;
  std::vector<TrajectoryPoint> trajectory;
};

// The first evaluation is always the zero vector. Throws InvalidConfig.
// budget.stagnation_limit counts evaluations since the best value last
// improved; restarting engines (GRASP, Hybrid, Scatter) spend many
// evaluations away from the incumbent, so set it near max_evaluations.
CoeffSearchResult search_coefficients(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                      CriterionKind kind, CoeffMethod method,
                                      const SearchBudget& budget,
                                      const CoeffSearchParams& params = {},
                                      std::size_t workers = 1);

struct CriterionPair {
  double ols;
  double search;
};

struct ComparisonReport {
  ModelConfig config;
  CriterionKind kind = CriterionKind::BIC;
  CoeffMethod method = CoeffMethod::GA;
  double ols_value = 0.0;
  double search_value = 0.0;
  double gap = 0.0;  // search_value - ols_value
  double coefficient_distance = 0.0;  // Frobenius norm of the difference
  std::size_t evaluations_used = 0;
  std::size_t effective_T = 0;
  bool degenerate = false;  // OLS residual covariance is singular
  std::map<CriterionKind, CriterionPair> breakdown;
  CoefficientSet ols_coefficients;
  CoefficientSet search_coefficients;
  std::vector<TrajectoryPoint> trajectory;
};

// Tolerance on the OLS lower bound for the search value.
inline constexpr double kGapTolerance = 1e-9;

// Throws Error if the search beats OLS by more than kGapTolerance.
ComparisonReport compare_with_ols(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                  CriterionKind kind, CoeffMethod method,
                                  const SearchBudget& budget,
                                  const CoeffSearchParams& params = {}, std::size_t workers = 1);

}  // namespace varsel
