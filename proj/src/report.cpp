#include "varsel/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "varsel/criteria.hpp"

#ifndef VARSEL_VERSION
#define VARSEL_VERSION "0.0.0"
#endif

namespace varsel {

namespace {

using json = nlohmann::ordered_json;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json coefficients_json(const CoefficientSet& c) {
  json out;
  out["A"] = json::array();
  for (const auto& a : c.A) out["A"].push_back(matrix_json(a));
  out["B"] = json::array();
  for (const auto& b : c.B) out["B"].push_back(matrix_json(b));
  out["C"] = c.C ? matrix_json(*c.C)[0] : json(nullptr);
  return out;
}

std::vector<std::string> pick_names(const TimeSeriesDataset& ds, const std::vector<std::size_t>& cols) {
  std::vector<std::string> out;
  for (auto c : cols) out.push_back(ds.names()[c]);
  return out;
}

json config_json(const ModelConfig& cfg, const TimeSeriesDataset& ds) {
  json out;
  out["p"] = cfg.p;
  out["q"] = cfg.q;
  out["constant"] = cfg.include_constant;
  if (cfg.dependent_mask.size() == ds.width()) {
    out["dependent"] = pick_names(ds, cfg.dependent_columns());
    out["independent"] = pick_names(ds, cfg.independent_columns());
  }
  return out;
}

json criteria_json(const std::map<CriterionKind, double>& values) {
  json out;
  for (auto kind : kAllCriteria) {
    const auto it = values.find(kind);
    out[std::string(to_string(kind))] = it == values.end() ? json(nullptr) : num(it->second);
  }
  return out;
}

json trajectory_json(const std::vector<TrajectoryPoint>& t) {
  json out = json::array();
  for (const auto& p : t) out.push_back(json::array({p.evaluation, num(p.best_value)}));
  return out;
}

json dataset_json(const TimeSeriesDataset& ds) {
  json out;
  out["rows"] = ds.length();
  out["columns"] = json::array();
  for (std::size_t i = 0; i < ds.width(); ++i)
    out["columns"].push_back(
        {{"name", ds.names()[i]},
         {"role", ds.roles()[i] == Role::Dependent ? "dependent" : "independent"}});
  return out;
}

json run_json(const RunConfig& run) {
  json out;
  out["command"] = run.command;
  out["input"] = run.input;
  out["dependent"] = run.dependent;
  out["independent"] = run.independent;
  out["criterion"] = std::string(to_string(run.criterion));
  out["method"] = run.method;
  out["p"] = run.p;
  out["q"] = run.q;
  out["constant"] = run.include_constant;
  out["p_max"] = run.p_max;
  out["q_max"] = run.q_max;
  out["search_partition"] = run.search_partition;
  out["switchable"] = run.switchable;
  out["budget"] = run.budget;
  out["stagnation"] = run.stagnation;
  out["warm_start"] = run.warm_start;
  out["seed"] = run.seed;
  out["horizon"] = run.horizon;
  out["future"] = run.future;
  out["simulate"] = {{"n", run.sim_n},         {"d", run.sim_d},
                     {"T", run.sim_T},         {"burn_in", run.sim_burn_in},
                     {"noise", run.sim_noise}, {"radius", run.sim_radius}};
  return out;
}

std::string machine(const RunConfig& run, const TimeSeriesDataset& ds, json result) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["version"] = version();
  doc["command"] = run.command;
  doc["seed"] = run.seed;
  doc["run_config"] = run_json(run);
  doc["dataset"] = dataset_json(ds);
  doc["result"] = std::move(result);
  return doc.dump(2) + "\n";
}

// Human layout

std::string g6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

std::string g10(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<std::string>& v) {
  if (v.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

class Text {
 public:
  void field(const std::string& label, const std::string& value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-20s", label.c_str());
    out_ << buf << value << "\n";
  }
  void line(const std::string& s = {}) { out_ << s << "\n"; }

  void matrix(const std::string& label, const Matrix& m) {
    if (m.size() == 1) {
      out_ << "  " << label << " = " << g6(m(0, 0)) << "\n";
      return;
    }
    out_ << "  " << label << " =\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out_ << "   ";
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        char buf[40];
        std::snprintf(buf, sizeof buf, " %13s", g6(m(r, c)).c_str());
        out_ << buf;
      }
      out_ << "\n";
    }
  }

  void coefficients(const CoefficientSet& c) {
    for (std::size_t t = 0; t < c.A.size(); ++t) matrix("A_" + std::to_string(t + 1), c.A[t]);
    for (std::size_t t = 0; t < c.B.size(); ++t) matrix("B_" + std::to_string(t + 1), c.B[t]);
    if (c.C) matrix("C", *c.C);
  }

  void criteria(const std::map<CriterionKind, double>& values) {
    for (auto kind : kAllCriteria) {
      const auto it = values.find(kind);
      field("  " + std::string(to_string(kind)), it == values.end() ? "undefined" : g10(it->second));
    }
  }

  void config(const ModelConfig& cfg, const TimeSeriesDataset& ds) {
    field("p", std::to_string(cfg.p));
    field("q", std::to_string(cfg.q));
    field("constant", cfg.include_constant ? "yes" : "no");
    field("dependent", join(pick_names(ds, cfg.dependent_columns())));
    field("independent", join(pick_names(ds, cfg.independent_columns())));
  }

  void header(const RunConfig& run, const TimeSeriesDataset& ds) {
    line(std::string("varsel ") + version() + "  " + run.command);
    field("seed", std::to_string(run.seed));
    if (!run.input.empty()) field("input", run.input);
    field("observations", std::to_string(ds.length()) + " rows, " + std::to_string(ds.width()) + " columns");
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace

const char* version() { return VARSEL_VERSION; }

std::string run_config_json(const RunConfig& run) { return run_json(run).dump(); }

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed run configuration: ") + e.what());
  }
  if (j.contains("run_config")) j = j["run_config"];
  RunConfig run;
  try {
    run.command = j.at("command").get<std::string>();
    run.input = j.value("input", "");
    run.dependent = j.value("dependent", std::vector<std::string>{});
    run.independent = j.value("independent", std::vector<std::string>{});
    const auto kind = parse_criterion(j.value("criterion", "bic"));
    if (!kind) throw DataError("unknown criterion in run configuration");
    run.criterion = *kind;
    run.method = j.value("method", "");
    run.p = j.value("p", run.p);
    run.q = j.value("q", run.q);
    run.include_constant = j.value("constant", true);
    run.p_max = j.value("p_max", run.p_max);
    run.q_max = j.value("q_max", run.q_max);
    run.search_partition = j.value("search_partition", false);
    run.switchable = j.value("switchable", std::vector<std::string>{});
    run.budget = j.value("budget", run.budget);
    run.stagnation = j.value("stagnation", run.stagnation);
    run.warm_start = j.value("warm_start", false);
    run.seed = j.value("seed", std::uint64_t{0});
    run.horizon = j.value("horizon", run.horizon);
    run.future = j.value("future", "");
    if (j.contains("simulate")) {
      const auto& s = j["simulate"];
      run.sim_n = s.value("n", run.sim_n);
      run.sim_d = s.value("d", run.sim_d);
      run.sim_T = s.value("T", run.sim_T);
      run.sim_burn_in = s.value("burn_in", run.sim_burn_in);
      run.sim_noise = s.value("noise", run.sim_noise);
      run.sim_radius = s.value("radius", run.sim_radius);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed run configuration: ") + e.what());
  }
  return run;
}

std::vector<std::string> to_arguments(const RunConfig& run) {
  std::vector<std::string> a{run.command};
  auto flag = [&](const std::string& name, const auto& value) {
    a.push_back(name);
    std::ostringstream s;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(value)>>) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      s << buf;
    } else {
      s << value;
    }
    a.push_back(s.str());
  };
  const std::string& c = run.command;
  const bool data = c != "simulate";
  if (data) {
    flag("--input", run.input);
    for (const auto& n : run.dependent) flag("--dependent", n);
    for (const auto& n : run.independent) flag("--independent", n);
    flag("--criterion", std::string(to_string(run.criterion)));
  }
  if (!run.include_constant) a.push_back("--no-constant");
  if (c != "select") {
    flag("--p", run.p);
    flag("--q", run.q);
  }
  if (c == "select" || c == "search-coeffs" || c == "compare") {
    flag("--method", run.method);
    flag("--budget", run.budget);
    flag("--stagnation", run.stagnation);
  }
  if (c == "select") {
    flag("--p-max", run.p_max);
    flag("--q-max", run.q_max);
    if (run.search_partition) a.push_back("--search-partition");
    for (const auto& n : run.switchable) flag("--switchable", n);
  }
  if ((c == "search-coeffs" || c == "compare") && run.warm_start) a.push_back("--warm-start");
  if (c == "forecast") {
    flag("--horizon", run.horizon);
    if (!run.future.empty()) flag("--future", run.future);
  }
  if (c == "simulate") {
    flag("--n", run.sim_n);
    flag("--d", run.sim_d);
    flag("--T", run.sim_T);
    flag("--burn-in", run.sim_burn_in);
    flag("--noise", run.sim_noise);
    flag("--radius", run.sim_radius);
  }
  flag("--seed", run.seed);
  return a;
}

std::string write_report(const FitResult& fit, const TimeSeriesDataset& ds, const RunConfig& run,
                         ReportFormat format) {
  if (format == ReportFormat::Machine) {
    json r;
    r["config"] = config_json(fit.config, ds);
    r["criteria"] = criteria_json(fit.criterion_values);
    r["n_params"] = fit.n_params;
    r["effective_T"] = fit.effective_T;
    r["row_start"] = fit.row_start;
    r["degenerate"] = fit.degenerate;
    r["coefficients"] = coefficients_json(fit.coefficients);
    r["sigma"] = matrix_json(fit.sigma);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.config(fit.config, ds);
  t.field("effective T", std::to_string(fit.effective_T));
  t.field("parameters", std::to_string(fit.n_params));
  t.field("degenerate", fit.degenerate ? "yes" : "no");
  t.line("criteria");
  t.criteria(fit.criterion_values);
  t.line("coefficients");
  t.coefficients(fit.coefficients);
  t.line("residual covariance");
  t.matrix("Sigma", fit.sigma);
  return t.str();
}

std::string write_report(const SearchResult& result, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    json r;
    r["method"] = result.method;
    r["criterion"] = std::string(to_string(run.criterion));
    r["best_value"] = num(result.best_value);
    r["best_config"] = config_json(result.best_config, ds);
    r["degenerate"] = result.degenerate;
    r["evaluations_used"] = result.evaluations_used;
    r["space_size"] = result.space_size;
    r["skipped"] = result.skipped;
    r["common_row_start"] = result.common_row_start;
    if (result.best_fit) {
      r["criteria"] = criteria_json(result.best_fit->criterion_values);
      r["n_params"] = result.best_fit->n_params;
      r["effective_T"] = result.best_fit->effective_T;
      r["coefficients"] = coefficients_json(result.best_fit->coefficients);
    }
    r["trajectory"] = trajectory_json(result.trajectory);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.field("method", result.method);
  t.field("criterion", std::string(to_string(run.criterion)));
  t.field("evaluations", std::to_string(result.evaluations_used) + " of " +
                             std::to_string(result.space_size) + " configurations");
  if (result.skipped) t.field("skipped", std::to_string(result.skipped) + " (too few observations)");
  t.field("best value", g10(result.best_value));
  t.field("degenerate", result.degenerate ? "yes" : "no");
  t.line("best configuration");
  t.config(result.best_config, ds);
  if (result.best_fit) {
    t.field("effective T", std::to_string(result.best_fit->effective_T));
    t.line("criteria");
    t.criteria(result.best_fit->criterion_values);
    t.line("coefficients");
    t.coefficients(result.best_fit->coefficients);
  }
  return t.str();
}

std::string write_report(const CoeffSearchReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format) {
  const auto& res = report.result;
  if (format == ReportFormat::Machine) {
    json r;
    r["method"] = std::string(to_string(res.method));
    r["criterion"] = std::string(to_string(run.criterion));
    r["value"] = num(res.value);
    r["config"] = config_json(report.config, ds);
    r["criteria"] = criteria_json(report.criteria);
    r["effective_T"] = report.effective_T;
    r["evaluations_used"] = res.evaluations_used;
    r["coefficients"] = coefficients_json(res.coefficients);
    r["trajectory"] = trajectory_json(res.trajectory);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.field("method", std::string(to_string(res.method)));
  t.field("criterion", std::string(to_string(run.criterion)));
  t.field("evaluations", std::to_string(res.evaluations_used));
  t.field("value", g10(res.value));
  t.config(report.config, ds);
  t.field("effective T", std::to_string(report.effective_T));
  t.line("criteria");
  t.criteria(report.criteria);
  t.line("coefficients");
  t.coefficients(res.coefficients);
  return t.str();
}

std::string write_report(const ComparisonReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    json r;
    r["method"] = std::string(to_string(report.method));
    r["criterion"] = std::string(to_string(report.kind));
    r["config"] = config_json(report.config, ds);
    r["ols_value"] = num(report.ols_value);
    r["search_value"] = num(report.search_value);
    r["gap"] = num(report.gap);
    r["coefficient_distance"] = num(report.coefficient_distance);
    r["evaluations_used"] = report.evaluations_used;
    r["effective_T"] = report.effective_T;
    r["degenerate"] = report.degenerate;
    json breakdown;
    for (const auto& [kind, pair] : report.breakdown)
      breakdown[std::string(to_string(kind))] = {{"ols", num(pair.ols)}, {"search", num(pair.search)}};
    r["breakdown"] = breakdown;
    r["ols_coefficients"] = coefficients_json(report.ols_coefficients);
    r["search_coefficients"] = coefficients_json(report.search_coefficients);
    r["trajectory"] = trajectory_json(report.trajectory);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.field("method", std::string(to_string(report.method)));
  t.field("criterion", std::string(to_string(report.kind)));
  t.config(report.config, ds);
  t.field("effective T", std::to_string(report.effective_T));
  t.field("evaluations", std::to_string(report.evaluations_used));
  t.field("OLS value", g10(report.ols_value));
  t.field("search value", g10(report.search_value));
  t.field("gap", g10(report.gap));
  t.field("coef. distance", g10(report.coefficient_distance));
  t.field("degenerate", report.degenerate ? "yes" : "no");
  t.line("criteria (OLS / search)");
  for (const auto& [kind, pair] : report.breakdown)
    t.field("  " + std::string(to_string(kind)), g10(pair.ols) + " / " + g10(pair.search));
  t.line("OLS coefficients");
  t.coefficients(report.ols_coefficients);
  t.line("search coefficients");
  t.coefficients(report.search_coefficients);
  return t.str();
}

std::string write_report(const SimulationReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format) {
  const auto& s = report.spec;
  if (format == ReportFormat::Machine) {
    json r;
    r["spectral_radius"] = num(report.spectral_radius);
    r["noise_scale"] = num(s.noise_scale);
    r["T"] = s.T;
    r["burn_in"] = s.burn_in;
    r["exogenous"] = s.exogenous == ExogenousKind::None ? "none" : "random_walk";
    r["true_coefficients"] = coefficients_json(s.true_coefficients);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.field("spectral radius", g10(report.spectral_radius));
  t.field("noise scale", g10(s.noise_scale));
  t.field("burn-in", std::to_string(s.burn_in));
  t.field("exogenous", s.exogenous == ExogenousKind::None ? "none" : "random walk");
  t.line("true coefficients");
  t.coefficients(s.true_coefficients);
  return t.str();
}

std::string write_report(const ForecastReport& report, const TimeSeriesDataset& ds,
                         const RunConfig& run, ReportFormat format) {
  const auto dep = pick_names(ds, report.fit.config.dependent_columns());
  if (format == ReportFormat::Machine) {
    json r;
    r["config"] = config_json(report.fit.config, ds);
    r["criteria"] = criteria_json(report.fit.criterion_values);
    r["horizon"] = report.values.rows();
    r["columns"] = dep;
    r["forecast"] = matrix_json(report.values);
    r["coefficients"] = coefficients_json(report.fit.coefficients);
    return machine(run, ds, std::move(r));
  }
  Text t;
  t.header(run, ds);
  t.config(report.fit.config, ds);
  t.line("criteria");
  t.criteria(report.fit.criterion_values);
  t.line("forecast");
  std::string head = "  step";
  for (const auto& n : dep) {
    char buf[40];
    std::snprintf(buf, sizeof buf, " %13s", n.c_str());
    head += buf;
  }
  t.line(head);
  for (Eigen::Index h = 0; h < report.values.rows(); ++h) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "  %4lld", static_cast<long long>(h + 1));
    std::string row = buf;
    for (Eigen::Index c = 0; c < report.values.cols(); ++c) {
      std::snprintf(buf, sizeof buf, " %13s", g6(report.values(h, c)).c_str());
      row += buf;
    }
    t.line(row);
  }
  return t.str();
}

}  // namespace varsel
