#pragma once

// Model-configuration search: exhaustive enumeration plus GA, Tabu, GRASP,
// Scatter Search and a GRASP+Tabu hybrid over the genome (p, q, mask bits).
//
// Every candidate is scored on a common sample (rows from the largest lag in
// the space onward), so criterion values are comparable across candidates.
// Evaluations are memoized: the budget counts distinct configurations fitted.
// Random decisions draw from streams derived from the master seed and a step
// counter, so results do not depend on the number of workers.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "varsel/model.hpp"
#include "varsel/seeding.hpp"

namespace varsel {

enum class PartitionMode { Fixed, Search };

struct SearchSpace {
  std::size_t p_max = 1;
  std::size_t q_max = 0;
  PartitionMode partition_mode = PartitionMode::Fixed;
  // Columns whose role is searched in Search mode (empty = every column).
  // The remaining columns keep their dataset role.
  std::vector<std::size_t> switchable_columns;
  bool include_constant = true;
};

struct SearchBudget {
  std::size_t max_evaluations = 1000;
  std::size_t stagnation_limit = 200;  // evaluations without improvement
  std::uint64_t master_seed = 0;
  bool keep_log = false;
};

// Search-space coordinates of a configuration. Bit i of `bits` set means
// switchable column i is dependent.
struct ConfigGenome {
  std::size_t p = 1;
  std::size_t q = 0;
  std::uint32_t bits = 0;

  bool operator==(const ConfigGenome&) const = default;
};

struct EnumeratedSpace {
  std::vector<ModelConfig> configs;  // lexicographic in (p, q, bits)
  std::vector<ConfigGenome> genomes;
  std::vector<std::size_t> switchable;  // dataset columns behind the mask bits
  std::vector<bool> base_mask;          // roles of non-switchable columns
  SearchSpace space;
  std::size_t skipped = 0;           // members rejected by validate_config
  std::size_t common_row_start = 0;  // max over members of max(p, q)

  std::size_t size() const noexcept { return configs.size(); }
  std::size_t genome_length() const noexcept { return 2 + switchable.size(); }
  ModelConfig to_config(const ConfigGenome& g) const;
  // Index of the genome in enumeration order, if it is a valid member.
  std::optional<std::size_t> find(const ConfigGenome& g) const;
};

// Throws EmptySpace when no member is valid.
EnumeratedSpace enumerate_space(const SearchSpace& space, const TimeSeriesDataset& ds);

struct Evaluation {
  double value = std::numeric_limits<double>::infinity();
  std::optional<FitResult> fit;
  bool rank_deficient = false;
  bool degenerate = false;  // value is -infinity (exact fit)
  std::string error;        // non-empty when the candidate could not be fitted
  std::size_t n_params = 0;
};

// OLS fit on rows common_row_start.. scored with `kind`. Never throws for a
// per-candidate failure: rank deficiency or an under-determined common sample
// yields value +infinity with a flag.
Evaluation evaluate_config(const TimeSeriesDataset& ds, const ModelConfig& cfg, CriterionKind kind,
                           std::size_t common_row_start);

// Results in candidate order, identical for any worker count. row_start
// defaults to the largest max(p, q) among the candidates.
std::vector<Evaluation> parallel_evaluate(const std::vector<ModelConfig>& candidates,
                                          const TimeSeriesDataset& ds, CriterionKind kind,
                                          std::size_t workers,
                                          std::optional<std::size_t> row_start = std::nullopt);

// Ordering used for every "best" decision: lower value, then fewer
// parameters, then earlier enumeration order.
struct CandidateRank {
  double value;
  std::size_t n_params;
  std::size_t order;
};
bool ranks_before(const CandidateRank& a, const CandidateRank& b) noexcept;

struct TrajectoryPoint {
  std::size_t evaluation;  // 1-based evaluation count when the best changed
  double best_value;
};

struct CandidateLogEntry {
  std::size_t evaluation;
  ModelConfig config;
  double value;
  bool rank_deficient;
};

struct SearchResult {
  std::string method;
  ModelConfig best_config;
  std::optional<FitResult> best_fit;  // absent only when no candidate could be fitted
  double best_value = std::numeric_limits<double>::infinity();
  bool degenerate = false;
  std::size_t evaluations_used = 0;
  std::size_t space_size = 0;
  std::size_t skipped = 0;
  std::size_t common_row_start = 0;
  std::vector<TrajectoryPoint> trajectory;
  std::vector<CandidateLogEntry> log;
};

struct GaParams {
  std::size_t population_size = 20;
  double crossover_rate = 0.9;
  double mutation_rate = 0.0;  // 0 selects 1 / genome length
  std::size_t max_generations = 10000;
};

struct TabuParams {
  std::size_t tenure = 7;
  std::size_t max_steps = 10000;
  std::optional<ConfigGenome> start;  // random valid member when absent
};

struct GraspParams {
  double alpha = 0.3;  // restricted candidate list fraction, in (0, 1]
  std::size_t max_rounds = 10000;
};

struct ScatterParams {
  std::size_t ref_set_size = 10;  // half by quality, half by diversity
  std::size_t max_iterations = 10000;
};

struct HybridParams {
  GraspParams grasp;
  TabuParams tabu;
  double construction_share = 0.3;  // budget fraction for GRASP construction
  std::size_t round_patience = 10;  // tabu steps without a round improvement
};

// Consecutive search steps that produce no new evaluation before a search
// gives up (every proposal was already memoized).
inline constexpr std::size_t kIdleStepLimit = 100;

// Throws TooLarge when the space exceeds budget.max_evaluations.
SearchResult exhaustive_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                               CriterionKind kind, const SearchBudget& budget,
                               std::size_t workers = 1);
SearchResult ga_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                       const SearchBudget& budget, const GaParams& params = {},
                       std::size_t workers = 1);
SearchResult tabu_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                         const SearchBudget& budget, const TabuParams& params = {},
                         std::size_t workers = 1);
SearchResult grasp_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                          const SearchBudget& budget, const GraspParams& params = {},
                          std::size_t workers = 1);
SearchResult scatter_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                            CriterionKind kind, const SearchBudget& budget,
                            const ScatterParams& params = {}, std::size_t workers = 1);
SearchResult hybrid_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                           CriterionKind kind, const SearchBudget& budget,
                           const HybridParams& params = {}, std::size_t workers = 1);

// Scatter Search combination: integer midpoint on p and q, bitwise majority
// with a random tie-break on the mask.
ConfigGenome combine_genomes(const ConfigGenome& a, const ConfigGenome& b, Rng& rng,
                             std::size_t mask_bits);

// Number of genome positions (p, q, each mask bit) that differ.
std::size_t genome_distance(const ConfigGenome& a, const ConfigGenome& b, std::size_t mask_bits);

}  // namespace varsel
