#include "varsel/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "varsel/coeff_search.hpp"
#include "varsel/config_search.hpp"
#include "varsel/criteria.hpp"
#include "varsel/io.hpp"
#include "varsel/ols.hpp"
#include "varsel/report.hpp"
#include "varsel/synthesis.hpp"

namespace varsel {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSelectMethods{"exhaustive", "ga", "tabu", "grasp", "scatter", "hybrid"};
const std::vector<std::string> kCoeffMethods{"ga", "tabu", "grasp", "scatter", "hybrid"};

void emit(const std::string& human, const std::string& machine, const RunConfig& run,
          std::ostream& out) {
  if (run.out.empty())
    out << human;
  else
    write_text_file(run.out, human);
  if (!run.out_json.empty()) write_text_file(run.out_json, machine);
}

template <class Result>
void report(const Result& r, const TimeSeriesDataset& ds, const RunConfig& run, std::ostream& out) {
  emit(write_report(r, ds, run, ReportFormat::Human), write_report(r, ds, run, ReportFormat::Machine),
       run, out);
}

TimeSeriesDataset load_input(const RunConfig& run) {
  return load_csv(run.input, RoleSpec{run.dependent, run.independent});
}

ModelConfig fixed_config(const RunConfig& run, const TimeSeriesDataset& ds) {
  return make_config(ds, run.p, run.q, run.include_constant);
}

SearchBudget budget_of(const RunConfig& run) {
  SearchBudget b;
  b.max_evaluations = run.budget;
  b.stagnation_limit = run.stagnation;
  b.master_seed = run.seed;
  return b;
}

std::size_t column_index(const TimeSeriesDataset& ds, const std::string& name) {
  const auto it = std::find(ds.names().begin(), ds.names().end(), name);
  if (it == ds.names().end()) throw MissingColumn(name);
  return static_cast<std::size_t>(it - ds.names().begin());
}

void run_fit(const RunConfig& run, std::ostream& out) {
  const auto ds = load_input(run);
  report(fit(ds, fixed_config(run, ds)), ds, run, out);
}

void run_select(const RunConfig& run, std::ostream& out) {
  const auto ds = load_input(run);
  SearchSpace space;
  space.p_max = run.p_max;
  space.q_max = run.q_max;
  space.include_constant = run.include_constant;
  space.partition_mode = run.search_partition ? PartitionMode::Search : PartitionMode::Fixed;
  if (!run.switchable.empty() && !run.search_partition)
    throw UsageError("--switchable needs --search-partition");
  for (const auto& name : run.switchable) space.switchable_columns.push_back(column_index(ds, name));

  const auto b = budget_of(run);
  const auto kind = run.criterion;
  const std::size_t w = run.workers;
  SearchResult r;
  if (run.method == "exhaustive") r = exhaustive_search(ds, space, kind, b, w);
  else if (run.method == "ga") r = ga_search(ds, space, kind, b, {}, w);
  else if (run.method == "tabu") r = tabu_search(ds, space, kind, b, {}, w);
  else if (run.method == "grasp") r = grasp_search(ds, space, kind, b, {}, w);
  else if (run.method == "scatter") r = scatter_search(ds, space, kind, b, {}, w);
  else r = hybrid_search(ds, space, kind, b, {}, w);
  report(r, ds, run, out);
}

CoeffSearchParams coeff_params(const RunConfig& run) {
  CoeffSearchParams p;
  p.warm_start_ols = run.warm_start;
  return p;
}

void run_search_coeffs(const RunConfig& run, std::ostream& out) {
  const auto ds = load_input(run);
  const auto cfg = fixed_config(run, ds);
  const auto method = *parse_coeff_method(run.method);
  CoeffSearchReport rep;
  rep.config = cfg;
  rep.result = search_coefficients(ds, cfg, run.criterion, method, budget_of(run), coeff_params(run),
                                   run.workers);
  const CoefficientObjective objective(ds, cfg, run.criterion);
  rep.effective_T = static_cast<std::size_t>(objective.system().Y.rows());
  for (auto kind : kAllCriteria) {
    try {
      rep.criteria[kind] = objective.value(kind, rep.result.theta);
    } catch (const HqcUndefined&) {
    }
  }
  report(rep, ds, run, out);
}

void run_compare(const RunConfig& run, std::ostream& out) {
  const auto ds = load_input(run);
  const auto method = *parse_coeff_method(run.method);
  report(compare_with_ols(ds, fixed_config(run, ds), run.criterion, method, budget_of(run),
                          coeff_params(run), run.workers),
         ds, run, out);
}

void run_forecast(const RunConfig& run, std::ostream& out) {
  const auto ds = load_input(run);
  ForecastReport rep;
  rep.fit = fit(ds, fixed_config(run, ds));
  std::optional<Matrix> future;
  if (!run.future.empty()) future = load_matrix_csv(run.future);
  rep.values = forecast(ds, rep.fit, run.horizon, future);
  if (!run.out_csv.empty()) {
    std::vector<std::string> names;
    for (auto c : rep.fit.config.dependent_columns()) names.push_back(ds.names()[c]);
    write_text_file(run.out_csv, format_csv(names, rep.values));
  }
  report(rep, ds, run, out);
}

void run_simulate(const RunConfig& run, std::ostream& out) {
  if (run.sim_n < 1) throw UsageError("--n must be at least 1");
  if (run.p < 1) throw UsageError("--p must be at least 1");
  if (run.sim_T < 1) throw UsageError("--T must be at least 1");
  if (!(run.sim_radius >= 0.0)) throw UsageError("--radius must be non-negative");
  if (!(run.sim_noise >= 0.0)) throw UsageError("--noise must be non-negative");
  if (run.q > 0 && run.sim_d == 0) throw UsageError("--q needs --d >= 1");

  SimulationReport rep;
  rep.spec.true_coefficients = random_stable_coefficients(run.seed, run.sim_n, run.p, run.sim_d,
                                                          run.q, run.include_constant, run.sim_radius);
  rep.spec.noise_scale = run.sim_noise;
  rep.spec.exogenous = run.sim_d > 0 ? ExogenousKind::RandomWalk : ExogenousKind::None;
  rep.spec.exogenous_dim = run.sim_d;
  rep.spec.T = run.sim_T;
  rep.spec.burn_in = run.sim_burn_in;
  rep.spec.seed = run.seed;
  rep.spectral_radius = companion_spectral_radius(rep.spec.true_coefficients);
  const auto ds = generate(rep.spec);

  const std::string csv = format_csv(ds);
  if (run.out_csv.empty()) {
    if (run.out.empty()) throw UsageError("simulate needs --out-csv or --out");
    out << csv;
  } else {
    write_text_file(run.out_csv, csv);
  }
  const std::string human = write_report(rep, ds, run, ReportFormat::Human);
  if (!run.out.empty()) write_text_file(run.out, human);
  if (!run.out_json.empty())
    write_text_file(run.out_json, write_report(rep, ds, run, ReportFormat::Machine));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lag order, variable role and coefficient selection for VAR models", "varsel"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  RunConfig run;
  std::string criterion = "bic";
  bool no_constant = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", run.seed, "Master seed (default 0)");
    sub->add_option("--workers", run.workers, "Parallel evaluation workers")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", run.out, "Human-readable report path (default: standard output)");
    sub->add_option("--out-json", run.out_json, "Machine-readable JSON report path");
    sub->add_flag("--no-constant", no_constant, "Drop the intercept");
  };
  auto data = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--input", run.input, "CSV file with a header row")->required();
    sub->add_option("--dependent", run.dependent, "Dependent column (repeatable)");
    sub->add_option("--independent", run.independent, "Independent column (repeatable)");
    sub->add_option("--criterion", criterion, "aic, bic or hqc")
        ->check(CLI::IsMember({"aic", "bic", "hqc"}));
  };
  auto orders = [&](CLI::App* sub) {
    sub->add_option("--p", run.p, "Lag order of the dependent block")->check(CLI::PositiveNumber);
    sub->add_option("--q", run.q, "Lag order of the independent block");
  };
  std::vector<CLI::Option*> stagnation_flags;
  auto budget = [&](CLI::App* sub) {
    sub->add_option("--budget", run.budget, "Maximum distinct evaluations")
        ->check(CLI::PositiveNumber);
    stagnation_flags.push_back(
        sub->add_option("--stagnation", run.stagnation,
                        "Stop after this many evaluations without improvement "
                        "(default: 200 for select, the budget otherwise)")
            ->check(CLI::PositiveNumber));
  };
  std::string select_method = "exhaustive";
  std::string coeff_method = "ga";

  auto* fit_cmd = app.add_subcommand("fit", "OLS fit of one configuration");
  data(fit_cmd);
  orders(fit_cmd);

  auto* select_cmd = app.add_subcommand("select", "Search lag orders and variable roles");
  data(select_cmd);
  select_cmd->add_option("--p-max", run.p_max, "Largest dependent lag")->check(CLI::PositiveNumber);
  select_cmd->add_option("--q-max", run.q_max, "Largest independent lag");
  select_cmd->add_flag("--search-partition", run.search_partition,
                       "Also search which columns are dependent");
  select_cmd->add_option("--switchable", run.switchable,
                         "Column whose role is searched (repeatable; default all)");
  select_cmd->add_option("--method", select_method, "Search method")
      ->check(CLI::IsMember(kSelectMethods));
  budget(select_cmd);

  auto* coeff_cmd = app.add_subcommand("search-coeffs", "Minimize the criterion over coefficients");
  data(coeff_cmd);
  orders(coeff_cmd);
  coeff_cmd->add_flag("--warm-start", run.warm_start, "Seed the search with the OLS solution");

  auto* compare_cmd = app.add_subcommand("compare", "Coefficient search against OLS");
  data(compare_cmd);
  orders(compare_cmd);
  compare_cmd->add_flag("--warm-start", run.warm_start, "Seed the search with the OLS solution");

  auto* forecast_cmd = app.add_subcommand("forecast", "Fit, then iterate the recurrence forward");
  data(forecast_cmd);
  orders(forecast_cmd);
  forecast_cmd->add_option("--horizon", run.horizon, "Steps ahead")->check(CLI::PositiveNumber);
  forecast_cmd->add_option("--future", run.future, "CSV of future independent values");
  forecast_cmd->add_option("--out-csv", run.out_csv, "Forecast table as CSV");

  auto* sim_cmd = app.add_subcommand("simulate", "Generate a stable synthetic VAR dataset");
  common(sim_cmd);
  orders(sim_cmd);
  sim_cmd->add_option("--n", run.sim_n, "Dependent variables");
  sim_cmd->add_option("--d", run.sim_d, "Independent variables (random walks)");
  sim_cmd->add_option("--T", run.sim_T, "Rows to emit");
  sim_cmd->add_option("--burn-in", run.sim_burn_in, "Rows discarded before output");
  sim_cmd->add_option("--noise", run.sim_noise, "Innovation standard deviation");
  sim_cmd->add_option("--radius", run.sim_radius, "Companion spectral radius");
  sim_cmd->add_option("--out-csv", run.out_csv, "Dataset path (default: standard output)");

  for (auto* sub : {coeff_cmd, compare_cmd}) {
    sub->add_option("--method", coeff_method, "Search method")->check(CLI::IsMember(kCoeffMethods));
    budget(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty())
      err << app.get_subcommands().front()->help();
    else
      err << app.help();
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  run.command = sub->get_name();
  run.criterion = *parse_criterion(criterion);
  run.include_constant = !no_constant;
  if (run.command == "select") run.method = select_method;
  if (run.command == "search-coeffs" || run.command == "compare") run.method = coeff_method;
  const bool stagnation_given = std::any_of(stagnation_flags.begin(), stagnation_flags.end(),
                                            [](const CLI::Option* o) { return o->count() > 0; });
  if (!stagnation_given && run.command != "select") run.stagnation = run.budget;

  try {
    if (run.command == "fit") run_fit(run, out);
    else if (run.command == "select") run_select(run, out);
    else if (run.command == "search-coeffs") run_search_coeffs(run, out);
    else if (run.command == "compare") run_compare(run, out);
    else if (run.command == "forecast") run_forecast(run, out);
    else run_simulate(run, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace varsel
