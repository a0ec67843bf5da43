#include "varsel/coeff_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "varsel/criteria.hpp"
#include "varsel/ols.hpp"
#include "varsel/parallel.hpp"
#include "varsel/seeding.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Step multipliers below this are treated as converged.
constexpr double kMinStep = 1e-10;
constexpr double kMaxStep = 4.0;

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return b > std::numeric_limits<std::size_t>::max() - a ? std::numeric_limits<std::size_t>::max() : a + b;
}

}  // namespace

std::string_view to_string(CoeffMethod method) {
  switch (method) {
    case CoeffMethod::GA:
      return "ga";
    case CoeffMethod::Tabu:
      return "tabu";
    case CoeffMethod::GRASP:
      return "grasp";
    case CoeffMethod::Scatter:
      return "scatter";
    case CoeffMethod::Hybrid:
      return "hybrid";
  }
  return "?";
}

std::optional<CoeffMethod> parse_coeff_method(std::string_view text) {
  for (auto m : {CoeffMethod::GA, CoeffMethod::Tabu, CoeffMethod::GRASP, CoeffMethod::Scatter,
                 CoeffMethod::Hybrid})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

Vector flatten_theta(const Matrix& theta) {
  Vector flat(theta.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < theta.rows(); ++r)
    for (Eigen::Index c = 0; c < theta.cols(); ++c) flat(k++) = theta(r, c);
  return flat;
}

Matrix unflatten_theta(const Vector& flat, std::size_t equations) {
  const auto n = static_cast<Eigen::Index>(equations);
  if (n < 1 || flat.size() % n != 0)
    throw DimensionMismatch("flat coefficient vector length is not a multiple of the equation count");
  Matrix theta(flat.size() / n, n);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < theta.rows(); ++r)
    for (Eigen::Index c = 0; c < n; ++c) theta(r, c) = flat(k++);
  return theta;
}

CoefficientObjective::CoefficientObjective(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                           CriterionKind kind,
                                           std::optional<std::size_t> row_start)
    : cfg_(cfg), kind_(kind) {
  auto violations = validate_config(cfg, ds, row_start);
  if (!violations.empty()) throw InvalidConfig(std::move(violations));
  sys_ = build_regression_system(ds, cfg, row_start);
  const auto K = sys_.X.cols();
  const auto n = sys_.Y.cols();
  dimension_ = static_cast<std::size_t>(K * n);
  penalty_factor(kind_, static_cast<std::size_t>(sys_.Y.rows()));  // HQC domain check

  const double y_norm = sys_.Y.colwise().norm().maxCoeff();
  const Vector x_norms = sys_.X.colwise().norm().transpose();
  const double x_norm = x_norms.maxCoeff();
  const double target = y_norm > 0.0 ? y_norm : 1.0;
  radius_ = x_norm > 0.0 ? 3.0 * target / x_norm : 3.0;

  scale_.resize(static_cast<Eigen::Index>(dimension_));
  for (Eigen::Index k = 0; k < K; ++k) {
    const double s = x_norms(k) > 0.0 ? target / x_norms(k) : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale_(k * n + i) = s;
  }
}

double CoefficientObjective::value(CriterionKind kind, const Vector& theta) const {
  if (theta.size() != static_cast<Eigen::Index>(dimension_) || !theta.allFinite()) return kInf;
  const Matrix stacked = unflatten_theta(theta, equations());
  const auto rc = residual_covariance(sys_, stacked);
  if (!rc.sigma.allFinite()) return kInf;
  const double log_det = residual_log_det(sys_, rc.sigma);
  return criterion_from_log_det(kind, log_det, dimension_, static_cast<std::size_t>(sys_.Y.rows()));
}

double CoefficientObjective::operator()(const Vector& theta) const { return value(kind_, theta); }

double coefficient_fitness(const TimeSeriesDataset& ds, const CoefficientGenome& genome,
                           CriterionKind kind, std::size_t common_row_start) {
  const CoefficientObjective objective(ds, genome.config, kind, common_row_start);
  return objective(genome.theta);
}

namespace {

// Budgeted evaluator with best-so-far tracking for the continuous engines.
class CoeffTracker {
 public:
  CoeffTracker(const CoefficientObjective& f, const SearchBudget& budget, std::size_t workers)
      : f_(f), budget_(budget), workers_(workers) {
    if (budget_.max_evaluations < 1) throw DataError("max_evaluations must be at least 1");
    if (budget_.stagnation_limit < 1) throw DataError("stagnation_limit must be at least 1");
    if (workers_ < 1) throw DataError("workers must be at least 1");
  }

  bool done() const {
    return used_ >= budget_.max_evaluations || since_improvement_ >= budget_.stagnation_limit;
  }
  std::size_t used() const { return used_; }
  Rng next_stream() { return make_stream(budget_.master_seed, stream_counter_++); }

  // Values in batch order. Entries beyond the remaining budget are not
  // evaluated and read +infinity.
  std::vector<double> evaluate(const std::vector<Vector>& batch) {
    const std::size_t take = std::min(batch.size(), budget_.max_evaluations - used_);
    std::vector<double> values(batch.size(), kInf);
    parallel_for(take, workers_, [&](std::size_t i) { values[i] = f_(batch[i]); });
    for (std::size_t i = 0; i < take; ++i) {
      ++used_;
      if (!best_value_ || values[i] < *best_value_) {
        best_value_ = values[i];
        best_theta_ = batch[i];
        since_improvement_ = 0;
        trajectory_.push_back({used_, values[i]});
      } else {
        ++since_improvement_;
      }
    }
    return values;
  }

  double evaluate(const Vector& x) { return evaluate(std::vector<Vector>{x}).front(); }

  double best_value() const { return best_value_.value_or(kInf); }
  const Vector& best_theta() const { return best_theta_; }
  std::vector<TrajectoryPoint> take_trajectory() { return std::move(trajectory_); }

 private:
  const CoefficientObjective& f_;
  SearchBudget budget_;
  std::size_t workers_;
  std::size_t used_ = 0;
  std::size_t since_improvement_ = 0;
  std::uint64_t stream_counter_ = 0;
  std::optional<double> best_value_;
  Vector best_theta_;
  std::vector<TrajectoryPoint> trajectory_;
};

struct Point {
  Vector x;
  double fx;
};

class Engines {
 public:
  Engines(const CoefficientObjective& f, CoeffTracker& tracker, const CoeffSearchParams& params,
          std::optional<Vector> ols)
      : f_(f),
        t_(tracker),
        p_(params),
        dim_(static_cast<Eigen::Index>(f.dimension())),
        sigma_(params.mutation_scale * f.coordinate_scale()),
        ols_(std::move(ols)) {
    if (!(params.mutation_scale > 0.0)) throw DataError("mutation scale must be positive");
  }

  Vector random_point(Rng& rng) const {
    std::uniform_real_distribution<double> box(-f_.init_radius(), f_.init_radius());
    Vector x(dim_);
    for (Eigen::Index k = 0; k < dim_; ++k) x(k) = box(rng);
    return x;
  }

  // Zero vector first, the OLS solution second when warm-starting, then
  // uniform samples from the initialization box.
  std::vector<Vector> initial_points(Rng& rng, std::size_t count) const {
    std::vector<Vector> pts;
    pts.push_back(Vector::Zero(dim_));
    if (ols_ && count > 1) pts.push_back(*ols_);
    while (pts.size() < count) pts.push_back(random_point(rng));
    return pts;
  }

  // Steepest descent over the 2*dim coordinate moves x +- h*sigma_k*e_k. The
  // multiplier h doubles after a success and halves after a failure. After a
  // success the displacement since the last pattern anchor is extrapolated,
  // doubling while it keeps improving.
  Point descend(Point start, std::size_t max_evals, double h = 1.0, double* final_h = nullptr) {
    const std::size_t limit = saturating_add(t_.used(), max_evals);
    Vector anchor = start.x;
    auto budget_left = [&] { return !t_.done() && t_.used() < limit; };
    while (budget_left() && h > kMinStep) {
      std::vector<Vector> nb;
      nb.reserve(static_cast<std::size_t>(2 * dim_));
      for (Eigen::Index k = 0; k < dim_; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector y = start.x;
          y(k) += sign * h * sigma_(k);
          nb.push_back(std::move(y));
        }
      }
      const auto vals = t_.evaluate(nb);
      const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
      if (!(vals[best] < start.fx)) {
        h *= 0.5;
        anchor = start.x;
        continue;
      }
      start = {std::move(nb[best]), vals[best]};
      h = std::min(2.0 * h, kMaxStep);

      Vector dir = start.x - anchor;
      while (budget_left()) {
        Vector y = start.x + dir;
        const double fy = t_.evaluate(y);
        if (!(fy < start.fx)) break;
        start = {std::move(y), fy};
        dir *= 2.0;
      }
      anchor = start.x;
    }
    if (final_h) *final_h = h;
    return start;
  }

  void ga() {
    const std::size_t pop_n = p_.population_size;
    if (pop_n < 2) throw DataError("GA population must be at least 2");
    const double rate = p_.mutation_rate > 0.0 ? p_.mutation_rate : 1.0 / static_cast<double>(dim_);

    std::vector<Point> pop;
    {
      Rng rng = t_.next_stream();
      auto pts = initial_points(rng, pop_n);
      const auto vals = t_.evaluate(pts);
      for (std::size_t i = 0; i < pts.size(); ++i) pop.push_back({std::move(pts[i]), vals[i]});
    }

    // Success-based step control: the mutation step grows after a generation
    // that improves the best member and shrinks otherwise.
    double step = 1.0;
    while (!t_.done()) {
      Rng rng = t_.next_stream();
      std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> gauss(0.0, 1.0);
      auto tournament = [&]() -> const Point& {
        const Point& a = pop[pick(rng)];
        const Point& b = pop[pick(rng)];
        return b.fx < a.fx ? b : a;
      };

      const auto elite_it =
          std::min_element(pop.begin(), pop.end(), [](const Point& a, const Point& b) { return a.fx < b.fx; });
      Point elite = *elite_it;

      std::vector<Vector> children;
      while (children.size() + 1 < pop_n) {
        const Point& mother = tournament();
        const Point& father = tournament();
        Vector child = mother.x;
        if (unit(rng) < p_.crossover_rate) {
          const double w = unit(rng);
          child = w * mother.x + (1.0 - w) * father.x;
        }
        for (Eigen::Index k = 0; k < dim_; ++k)
          if (unit(rng) < rate) child(k) += step * sigma_(k) * gauss(rng);
        children.push_back(std::move(child));
      }
      const auto vals = t_.evaluate(children);

      double best_child = kInf;
      pop.clear();
      pop.push_back(elite);
      for (std::size_t i = 0; i < children.size(); ++i) {
        best_child = std::min(best_child, vals[i]);
        pop.push_back({std::move(children[i]), vals[i]});
      }
      step = best_child < elite.fx ? std::min(step * 1.5, kMaxStep) : std::max(step * 0.7, kMinStep);
    }
  }

  // Tabu over coordinate moves: moving coordinate k makes k tabu for
  // `tenure` steps (capped so one coordinate stays free) unless the move
  // beats the best-so-far.
  void tabu_from(Point current, std::size_t max_evals, double h = 1.0) {
    const std::size_t limit =
        max_evals == 0 ? std::numeric_limits<std::size_t>::max() : saturating_add(t_.used(), max_evals);
    const std::size_t tenure =
        std::min<std::size_t>(p_.tabu_tenure, static_cast<std::size_t>(dim_) - 1);
    std::vector<std::size_t> tabu_until(static_cast<std::size_t>(dim_), 0);
    Point local_best = current;
    std::size_t without_improvement = 0;

    for (std::size_t step = 1; !t_.done() && t_.used() < limit && h > kMinStep; ++step) {
      const double before = t_.best_value();
      std::vector<Vector> nb;
      std::vector<std::size_t> coord;
      for (Eigen::Index k = 0; k < dim_; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector y = current.x;
          y(k) += sign * h * sigma_(k);
          nb.push_back(std::move(y));
          coord.push_back(static_cast<std::size_t>(k));
        }
      }
      const auto vals = t_.evaluate(nb);
      std::optional<std::size_t> chosen;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const bool is_tabu = tabu_until[coord[i]] >= step;
        if (is_tabu && !(vals[i] < before)) continue;
        if (!chosen || vals[i] < vals[*chosen]) chosen = i;
      }
      if (!chosen) break;
      tabu_until[coord[*chosen]] = step + tenure;
      current = {std::move(nb[*chosen]), vals[*chosen]};

      if (current.fx < local_best.fx) {
        local_best = current;
        without_improvement = 0;
      } else if (++without_improvement >= 2 * static_cast<std::size_t>(dim_)) {
        // Intensify: return to the walk's best point with a finer step.
        h *= 0.5;
        current = local_best;
        without_improvement = 0;
        std::fill(tabu_until.begin(), tabu_until.end(), 0);
      }
    }
  }

  // Coordinate-wise greedy randomized construction: each coordinate in turn
  // is placed at a value drawn from the best alpha-fraction of evenly spaced
  // trial values across the initialization box.
  Point construct(Rng& rng, Vector x) {
    if (!(p_.alpha > 0.0 && p_.alpha <= 1.0)) throw DataError("GRASP alpha must lie in (0, 1]");
    const std::size_t m = std::max<std::size_t>(p_.line_points, 2);
    const double r = f_.init_radius();
    double fx = t_.evaluate(x);
    for (Eigen::Index k = 0; k < dim_ && !t_.done(); ++k) {
      std::vector<Vector> trials;
      for (std::size_t j = 0; j < m; ++j) {
        Vector y = x;
        y(k) = -r + 2.0 * r * static_cast<double>(j) / static_cast<double>(m - 1);
        trials.push_back(std::move(y));
      }
      const auto vals = t_.evaluate(trials);
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const auto rcl = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::ceil(p_.alpha * static_cast<double>(m) - 1e-12)), 1, m);
      std::uniform_int_distribution<std::size_t> pick(0, rcl - 1);
      const std::size_t chosen = order[pick(rng)];
      if (!std::isfinite(vals[chosen]) && std::isfinite(fx)) continue;
      x = trials[chosen];
      fx = vals[chosen];
    }
    return {std::move(x), fx};
  }

  void grasp() {
    bool first = true;
    while (!t_.done()) {
      Rng rng = t_.next_stream();
      Vector start = first ? Vector::Zero(dim_) : random_point(rng);
      first = false;
      descend(construct(rng, std::move(start)), std::numeric_limits<std::size_t>::max());
    }
  }

  void scatter() {
    const std::size_t b = p_.ref_set_size;
    if (b < 4) throw DataError("reference set needs at least 4 members");
    const std::size_t improve =
        p_.improvement_evaluations ? p_.improvement_evaluations : 20 * static_cast<std::size_t>(dim_);

    auto distance = [&](const Vector& a, const Vector& c) {
      return ((a - c).array() / sigma_.array()).matrix().norm();
    };
    auto build = [&](std::vector<Point> pool) {
      std::stable_sort(pool.begin(), pool.end(), [](const Point& a, const Point& c) { return a.fx < c.fx; });
      std::vector<Point> ref;
      std::size_t next = 0;
      for (; next < pool.size() && ref.size() < b / 2; ++next) ref.push_back(pool[next]);
      std::vector<Point> rest(pool.begin() + static_cast<std::ptrdiff_t>(next), pool.end());
      while (ref.size() < b && !rest.empty()) {
        std::size_t best_pos = 0;
        double best_dist = -1.0;
        for (std::size_t k = 0; k < rest.size(); ++k) {
          double dmin = kInf;
          for (const auto& r : ref) dmin = std::min(dmin, distance(rest[k].x, r.x));
          if (dmin > best_dist) {
            best_dist = dmin;
            best_pos = k;
          }
        }
        ref.push_back(rest[best_pos]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best_pos));
      }
      return ref;
    };

    std::vector<Point> ref;
    {
      Rng rng = t_.next_stream();
      auto pts = initial_points(rng, 2 * b);
      const auto vals = t_.evaluate(pts);
      std::vector<Point> pool;
      for (std::size_t i = 0; i < pts.size(); ++i) pool.push_back({std::move(pts[i]), vals[i]});
      ref = build(std::move(pool));
    }

    double h = 1.0;  // improvement step carried between iterations
    while (!t_.done()) {
      Rng rng = t_.next_stream();
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<Vector> children;
      for (std::size_t i = 0; i < ref.size(); ++i)
        for (std::size_t j = i + 1; j < ref.size(); ++j) {
          const double w = unit(rng);
          children.push_back(w * ref[i].x + (1.0 - w) * ref[j].x);
        }
      const auto vals = t_.evaluate(children);

      // Improve the best few combinations, keep the rest as evaluated.
      std::vector<std::size_t> order(children.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t c) { return vals[a] < vals[c]; });
      std::vector<Point> pool = ref;
      for (std::size_t k = 0; k < order.size() && !t_.done(); ++k) {
        Point child{children[order[k]], vals[order[k]]};
        if (k < b / 2) {
          double h_end = h;
          child = descend(std::move(child), improve, h, &h_end);
          if (k == 0) h = std::clamp(4.0 * h_end, 1e-6, 1.0);
        }
        pool.push_back(std::move(child));
      }
      const double previous_best = ref.front().fx;
      ref = build(std::move(pool));
      if (!(ref.front().fx < previous_best)) {
        // Stalled: keep the quality half and refill with fresh box samples.
        std::vector<Vector> fresh;
        for (std::size_t k = 0; k < b; ++k) fresh.push_back(random_point(rng));
        const auto fvals = t_.evaluate(fresh);
        std::vector<Point> next(ref.begin(), ref.begin() + static_cast<std::ptrdiff_t>(std::min(b / 2, ref.size())));
        for (std::size_t k = 0; k < fresh.size(); ++k) next.push_back({std::move(fresh[k]), fvals[k]});
        ref = build(std::move(next));
      }
    }
  }

  void hybrid(std::size_t max_evaluations) {
    const auto construction_budget =
        static_cast<std::size_t>(std::ceil(p_.construction_share * static_cast<double>(max_evaluations)));
    std::size_t construction_used = 0;
    bool first = true;
    while (!t_.done()) {
      Rng rng = t_.next_stream();
      Point start;
      if (construction_used < construction_budget) {
        const std::size_t before = t_.used();
        start = construct(rng, first ? Vector::Zero(dim_) : random_point(rng));
        construction_used += t_.used() - before;
      } else {
        Vector x = t_.best_theta();
        start = {x, t_.best_value()};
      }
      first = false;
      tabu_from(std::move(start), 0);
    }
  }

 private:
  const CoefficientObjective& f_;
  CoeffTracker& t_;
  CoeffSearchParams p_;
  Eigen::Index dim_;
  Vector sigma_;
  std::optional<Vector> ols_;
};

}  // namespace

CoeffSearchResult search_coefficients(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                      CriterionKind kind, CoeffMethod method,
                                      const SearchBudget& budget, const CoeffSearchParams& params,
                                      std::size_t workers) {
  const CoefficientObjective objective(ds, cfg, kind);
  std::optional<Vector> ols;
  if (params.warm_start_ols) ols = flatten_theta(solve_least_squares(objective.system()));

  CoeffTracker tracker(objective, budget, workers);
  Engines engines(objective, tracker, params, ols);
  switch (method) {
    case CoeffMethod::GA:
      engines.ga();
      break;
    case CoeffMethod::Tabu: {
      const Vector zero = Vector::Zero(static_cast<Eigen::Index>(objective.dimension()));
      const double fz = tracker.evaluate(zero);
      engines.tabu_from({zero, fz}, 0);
      // Restart from the best point with a fresh tabu list until the budget ends.
      while (!tracker.done()) {
        const std::size_t before = tracker.used();
        engines.tabu_from({tracker.best_theta(), tracker.best_value()}, 0, 0.5);
        if (tracker.used() == before) break;
      }
      break;
    }
    case CoeffMethod::GRASP:
      engines.grasp();
      break;
    case CoeffMethod::Scatter:
      engines.scatter();
      break;
    case CoeffMethod::Hybrid:
      engines.hybrid(budget.max_evaluations);
      break;
  }

  CoeffSearchResult out;
  out.method = method;
  out.theta = tracker.best_theta();
  out.value = tracker.best_value();
  out.evaluations_used = tracker.used();
  out.trajectory = tracker.take_trajectory();
  out.coefficients = unflatten_coefficients(unflatten_theta(out.theta, objective.equations()), cfg, ds);
  return out;
}

ComparisonReport compare_with_ols(const TimeSeriesDataset& ds, const ModelConfig& cfg,
                                  CriterionKind kind, CoeffMethod method,
                                  const SearchBudget& budget, const CoeffSearchParams& params,
                                  std::size_t workers) {
  const FitResult ols = fit(ds, cfg);
  const CoefficientObjective objective(ds, cfg, kind, ols.row_start);
  const auto found = search_coefficients(ds, cfg, kind, method, budget, params, workers);

  ComparisonReport report;
  report.config = cfg;
  report.kind = kind;
  report.method = method;
  report.ols_value = objective(flatten_theta(ols.theta));
  report.search_value = found.value;
  report.degenerate = ols.degenerate;
  report.evaluations_used = found.evaluations_used;
  report.effective_T = ols.effective_T;
  report.ols_coefficients = ols.coefficients;
  report.search_coefficients = found.coefficients;
  report.trajectory = found.trajectory;
  report.coefficient_distance = (flatten_theta(ols.theta) - found.theta).norm();

  if (std::isinf(report.ols_value) && report.ols_value < 0.0)
    report.gap = report.search_value == report.ols_value ? 0.0 : kInf;
  else
    report.gap = report.search_value - report.ols_value;
  if (report.gap < -kGapTolerance)
    throw Error("coefficient search beat OLS by " + std::to_string(-report.gap) +
                " criterion units; least-squares optimality violated");

  const Vector search_theta = found.theta;
  const Vector ols_theta = flatten_theta(ols.theta);
  for (auto k : kAllCriteria) {
    try {
      report.breakdown[k] = {objective.value(k, ols_theta), objective.value(k, search_theta)};
    } catch (const HqcUndefined&) {
    }
  }
  return report;
}

}  // namespace varsel
