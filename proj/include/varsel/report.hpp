#pragma once

// Run configuration and report rendering.
//
// Machine reports are JSON objects with these top-level fields, in order:
//   schema_version, version, command, seed, run_config, dataset, result
// Non-finite numbers are written as the strings "inf", "-inf" and "nan".

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "varsel/coeff_search.hpp"
#include "varsel/config_search.hpp"
#include "varsel/model.hpp"
#include "varsel/synthesis.hpp"

namespace varsel {

inline constexpr int kSchemaVersion = 1;
const char* version();

// Everything needed to repeat a run. Worker count and output paths do not
// affect results and are left out of reports.
struct RunConfig {
  std::string command;
  std::string input;
  std::vector<std::string> dependent;
  std::vector<std::string> independent;
  CriterionKind criterion = CriterionKind::BIC;
  std::string method;
  std::size_t p = 1;
  std::size_t q = 0;
  bool include_constant = true;
  std::size_t p_max = 4;
  std::size_t q_max = 0;
  bool search_partition = false;
  std::vector<std::string> switchable;
  std::size_t budget = 1000;
  std::size_t stagnation = 200;
  bool warm_start = false;
  std::uint64_t seed = 0;
  std::size_t horizon = 1;
  std::string future;  // CSV of exogenous rows for times T, T+1, ...

  // simulate
  std::size_t sim_n = 2;
  std::size_t sim_d = 0;
  std::size_t sim_T = 200;
  std::size_t sim_burn_in = 100;
  double sim_noise = 1.0;
  double sim_radius = 0.8;

  std::size_t workers = 1;
  std::string out;
  std::string out_json;
  std::string out_csv;
};

// JSON object of the reproducible fields, and its inverse.
std::string run_config_json(const RunConfig& run);
RunConfig parse_run_config(const std::string& json);
// Command line that repeats the run (without output paths).
std::vector<std::string> to_arguments(const RunConfig& run);

enum class ReportFormat { Human, Machine };

struct CoeffSearchReport {
  ModelConfig config;
  CoeffSearchResult result;
  std::map<CriterionKind, double> criteria;
  std::size_t effective_T = 0;
};

struct SimulationReport {
  GeneratorSpec spec;
  double spectral_radius = 0.0;
};

struct ForecastReport {
  FitResult fit;
  Matrix values;  // horizon x n
};

std::string write_report(const FitResult& fit, const TimeSeriesDataset& ds, const RunConfig& run,
                         ReportFormat format);
std::string write_report(const SearchResult& result, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format);
std::string write_report(const CoeffSearchReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format);
std::string write_report(const ComparisonReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format);
std::string write_report(const SimulationReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format);
std::string write_report(const ForecastReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format);

}  // namespace varsel
