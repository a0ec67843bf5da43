#include "varsel/config_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "varsel/criteria.hpp"
#include "varsel/ols.hpp"
#include "varsel/parallel.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSwitchable = 20;

}  // namespace

ModelConfig EnumeratedSpace::to_config(const ConfigGenome& g) const {
  ModelConfig cfg;
  cfg.p = g.p;
  cfg.q = g.q;
  cfg.include_constant = space.include_constant;
  cfg.dependent_mask = base_mask;
  for (std::size_t i = 0; i < switchable.size(); ++i)
    cfg.dependent_mask[switchable[i]] = ((g.bits >> i) & 1U) != 0;
  return cfg;
}

std::optional<std::size_t> EnumeratedSpace::find(const ConfigGenome& g) const {
  // genomes are sorted lexicographically, so binary search applies
  auto less = [](const ConfigGenome& a, const ConfigGenome& b) {
    return std::tie(a.p, a.q, a.bits) < std::tie(b.p, b.q, b.bits);
  };
  auto it = std::lower_bound(genomes.begin(), genomes.end(), g, less);
  if (it == genomes.end() || !(*it == g)) return std::nullopt;
  return static_cast<std::size_t>(it - genomes.begin());
}

EnumeratedSpace enumerate_space(const SearchSpace& space, const TimeSeriesDataset& ds) {
  if (space.p_max < 1) throw EmptySpace("search space needs p_max >= 1");

  EnumeratedSpace out;
  out.space = space;
  out.base_mask = ds.default_mask();
  if (space.partition_mode == PartitionMode::Search) {
    if (space.switchable_columns.empty()) {
      out.switchable.resize(ds.width());
      std::iota(out.switchable.begin(), out.switchable.end(), std::size_t{0});
    } else {
      std::set<std::size_t> unique(space.switchable_columns.begin(), space.switchable_columns.end());
      for (auto c : unique)
        if (c >= ds.width()) throw DataError("switchable column index out of range");
      out.switchable.assign(unique.begin(), unique.end());
    }
    if (out.switchable.size() > kMaxSwitchable)
      throw TooLarge("at most " + std::to_string(kMaxSwitchable) + " switchable columns");
  }

  const std::uint32_t masks = 1U << out.switchable.size();
  for (std::size_t p = 1; p <= space.p_max; ++p) {
    for (std::size_t q = 0; q <= space.q_max; ++q) {
      for (std::uint32_t bits = 0; bits < masks; ++bits) {
        const ConfigGenome g{p, q, bits};
        ModelConfig cfg = out.to_config(g);
        if (!validate_config(cfg, ds).empty()) {
          ++out.skipped;
          continue;
        }
        out.common_row_start = std::max(out.common_row_start, cfg.max_lag());
        out.configs.push_back(std::move(cfg));
        out.genomes.push_back(g);
      }
    }
  }
  if (out.configs.empty())
    throw EmptySpace("no valid configuration in the search space (" +
                     std::to_string(out.skipped) + " rejected)");
  return out;
}

Evaluation evaluate_config(const TimeSeriesDataset& ds, const ModelConfig& cfg, CriterionKind kind,
                           std::size_t common_row_start) {
  Evaluation ev;
  ev.n_params = cfg.n_dependent() * cfg.regressor_count();
  try {
    FitResult f = fit(ds, cfg, common_row_start);
    auto it = f.criterion_values.find(kind);
    if (it == f.criterion_values.end())
      throw HqcUndefined("criterion undefined for effective sample " +
                         std::to_string(f.effective_T));
    ev.value = it->second;
    ev.degenerate = f.degenerate;
    ev.fit = std::move(f);
  } catch (const RankDeficient& e) {
    ev.rank_deficient = true;
    ev.error = e.what();
  } catch (const Error& e) {
    ev.error = e.what();
  }
  return ev;
}

std::vector<Evaluation> parallel_evaluate(const std::vector<ModelConfig>& candidates,
                                          const TimeSeriesDataset& ds, CriterionKind kind,
                                          std::size_t workers,
                                          std::optional<std::size_t> row_start) {
  if (workers < 1) throw DataError("workers must be at least 1");
  std::size_t start = 0;
  if (row_start) {
    start = *row_start;
  } else {
    for (const auto& c : candidates) start = std::max(start, c.max_lag());
  }
  std::vector<Evaluation> out(candidates.size());
  parallel_for(candidates.size(), workers,
               [&](std::size_t i) { out[i] = evaluate_config(ds, candidates[i], kind, start); });
  return out;
}

bool ranks_before(const CandidateRank& a, const CandidateRank& b) noexcept {
  if (a.value < b.value) return true;
  if (b.value < a.value) return false;
  if (a.n_params != b.n_params) return a.n_params < b.n_params;
  return a.order < b.order;
}

ConfigGenome combine_genomes(const ConfigGenome& a, const ConfigGenome& b, Rng& rng,
                             std::size_t mask_bits) {
  ConfigGenome c;
  c.p = (a.p + b.p) / 2;
  c.q = (a.q + b.q) / 2;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < mask_bits; ++i) {
    const std::uint32_t bit = 1U << i;
    const bool from_a = (a.bits & bit) != 0;
    const bool from_b = (b.bits & bit) != 0;
    const bool set = from_a == from_b ? from_a : coin(rng);
    if (set) c.bits |= bit;
  }
  return c;
}

std::size_t genome_distance(const ConfigGenome& a, const ConfigGenome& b, std::size_t mask_bits) {
  std::size_t dist = (a.p != b.p) + (a.q != b.q);
  for (std::size_t i = 0; i < mask_bits; ++i) dist += ((a.bits ^ b.bits) >> i) & 1U;
  return dist;
}

namespace {

// Memoizing evaluator shared by all engines. Tracks budget, stagnation,
// best-so-far and the trajectory.
class Explorer {
 public:
  Explorer(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
           const SearchBudget& budget, std::size_t workers, std::string method)
      : ds_(ds),
        space_(enumerate_space(space, ds)),
        kind_(kind),
        budget_(budget),
        workers_(workers),
        method_(std::move(method)),
        cache_(space_.size()) {
    if (budget_.max_evaluations < 1) throw DataError("max_evaluations must be at least 1");
    if (budget_.stagnation_limit < 1) throw DataError("stagnation_limit must be at least 1");
    if (workers_ < 1) throw DataError("workers must be at least 1");
  }

  const EnumeratedSpace& space() const { return space_; }
  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_.max_evaluations - used_; }

  Rng next_stream() { return make_stream(budget_.master_seed, stream_counter_++); }

  bool done() const {
    return used_ >= budget_.max_evaluations || since_improvement_ >= budget_.stagnation_limit ||
           used_ == space_.size() || idle_steps_ >= kIdleStepLimit;
  }

  bool evaluated(std::size_t index) const { return cache_[index].has_value(); }

  CandidateRank rank(std::size_t index) const {
    const double value = cache_[index] ? cache_[index]->value : kInf;
    return {value, space_.configs[index].n_dependent() * space_.configs[index].regressor_count(),
            index};
  }

  CandidateRank rank(const ConfigGenome& g) const {
    if (auto idx = space_.find(g)) return rank(*idx);
    return {kInf, std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max()};
  }

  std::optional<CandidateRank> best_rank() const {
    if (!best_) return std::nullopt;
    return rank(*best_);
  }

  // Values in batch order; +infinity for genomes outside the space or cut by
  // the budget.
  std::vector<double> evaluate(const std::vector<ConfigGenome>& batch) {
    std::vector<std::size_t> fresh;
    for (const auto& g : batch) {
      auto idx = space_.find(g);
      if (!idx || cache_[*idx]) continue;
      if (std::find(fresh.begin(), fresh.end(), *idx) != fresh.end()) continue;
      if (fresh.size() >= remaining()) break;
      fresh.push_back(*idx);
    }
    idle_steps_ = fresh.empty() ? idle_steps_ + 1 : 0;

    if (!fresh.empty()) {
      std::vector<ModelConfig> configs;
      configs.reserve(fresh.size());
      for (auto idx : fresh) configs.push_back(space_.configs[idx]);
      auto results = parallel_evaluate(configs, ds_, kind_, workers_, space_.common_row_start);
      for (std::size_t i = 0; i < fresh.size(); ++i) record(fresh[i], std::move(results[i]));
    }

    std::vector<double> values;
    values.reserve(batch.size());
    for (const auto& g : batch) values.push_back(rank(g).value);
    return values;
  }

  double evaluate(const ConfigGenome& g) { return evaluate(std::vector<ConfigGenome>{g}).front(); }

  ConfigGenome random_member(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, space_.size() - 1);
    return space_.genomes[pick(rng)];
  }

  // Valid members one move away: p +- 1, q +- 1, one mask bit flipped.
  std::vector<ConfigGenome> neighbors(const ConfigGenome& g) const {
    std::vector<ConfigGenome> out;
    auto push = [&](ConfigGenome c) {
      if (space_.find(c)) out.push_back(c);
    };
    if (g.p > 1) push({g.p - 1, g.q, g.bits});
    if (g.p < space_.space.p_max) push({g.p + 1, g.q, g.bits});
    if (g.q > 0) push({g.p, g.q - 1, g.bits});
    if (g.q < space_.space.q_max) push({g.p, g.q + 1, g.bits});
    for (std::size_t i = 0; i < space_.switchable.size(); ++i) push({g.p, g.q, g.bits ^ (1U << i)});
    return out;
  }

  SearchResult finish() && {
    SearchResult out;
    out.method = method_;
    out.evaluations_used = used_;
    out.space_size = space_.size();
    out.skipped = space_.skipped;
    out.common_row_start = space_.common_row_start;
    out.trajectory = std::move(trajectory_);
    out.log = std::move(log_);
    if (best_) {
      out.best_config = space_.configs[*best_];
      out.best_value = cache_[*best_]->value;
      out.degenerate = cache_[*best_]->degenerate;
      out.best_fit = std::move(cache_[*best_]->fit);
    }
    return out;
  }

 private:
  void record(std::size_t index, Evaluation ev) {
    ++used_;
    const double value = ev.value;
    if (budget_.keep_log)
      log_.push_back({used_, space_.configs[index], value, ev.rank_deficient});
    cache_[index] = std::move(ev);

    if (!best_) {
      best_ = index;
      since_improvement_ = 0;
      trajectory_.push_back({used_, value});
      return;
    }
    const double previous = cache_[*best_]->value;
    if (ranks_before(rank(index), rank(*best_))) best_ = index;
    if (value < previous) {
      since_improvement_ = 0;
      trajectory_.push_back({used_, value});
    } else {
      ++since_improvement_;
    }
  }

  const TimeSeriesDataset& ds_;
  EnumeratedSpace space_;
  CriterionKind kind_;
  SearchBudget budget_;
  std::size_t workers_;
  std::string method_;
  std::vector<std::optional<Evaluation>> cache_;
  std::size_t used_ = 0;
  std::size_t since_improvement_ = 0;
  std::size_t idle_steps_ = 0;
  std::uint64_t stream_counter_ = 0;
  std::optional<std::size_t> best_;
  std::vector<TrajectoryPoint> trajectory_;
  std::vector<CandidateLogEntry> log_;
};

std::size_t rcl_size(double alpha, std::size_t count) {
  const auto size = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(count) - 1e-12));
  return std::clamp<std::size_t>(size, 1, count);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DataError("GRASP alpha must lie in (0, 1]");
}

// Greedy randomized construction, one dimension at a time: p, q, then each
// mask bit. Each dimension is set by sampling from the best alpha-fraction of
// its feasible values, the other dimensions held at their current values.
ConfigGenome grasp_construct(Explorer& ex, Rng& rng, double alpha) {
  const auto& sp = ex.space();
  ConfigGenome g{1, 0, 0};
  for (std::size_t i = 0; i < sp.switchable.size(); ++i)
    if (sp.base_mask[sp.switchable[i]]) g.bits |= 1U << i;

  const std::size_t dims = sp.genome_length();
  for (std::size_t dim = 0; dim < dims && !ex.done(); ++dim) {
    std::vector<ConfigGenome> options;
    if (dim == 0) {
      for (std::size_t p = 1; p <= sp.space.p_max; ++p) options.push_back({p, g.q, g.bits});
    } else if (dim == 1) {
      for (std::size_t q = 0; q <= sp.space.q_max; ++q) options.push_back({g.p, q, g.bits});
    } else {
      const std::uint32_t bit = 1U << (dim - 2);
      options.push_back({g.p, g.q, g.bits & ~bit});
      options.push_back({g.p, g.q, g.bits | bit});
    }
    if (options.size() < 2) continue;
    ex.evaluate(options);

    std::vector<std::pair<CandidateRank, ConfigGenome>> ranked;
    for (const auto& o : options) {
      auto idx = sp.find(o);
      if (idx && ex.evaluated(*idx)) ranked.emplace_back(ex.rank(*idx), o);
    }
    if (ranked.empty()) continue;
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return ranks_before(a.first, b.first); });
    std::uniform_int_distribution<std::size_t> pick(0, rcl_size(alpha, ranked.size()) - 1);
    g = ranked[pick(rng)].second;
  }
  if (!sp.find(g)) g = ex.random_member(rng);
  ex.evaluate(g);
  return g;
}

// Steepest descent over the one-move neighborhood.
ConfigGenome local_descent(Explorer& ex, ConfigGenome g) {
  ex.evaluate(g);
  while (!ex.done()) {
    auto nb = ex.neighbors(g);
    if (nb.empty()) break;
    ex.evaluate(nb);
    auto best = std::min_element(nb.begin(), nb.end(), [&](const auto& a, const auto& b) {
      return ranks_before(ex.rank(a), ex.rank(b));
    });
    if (!ranks_before(ex.rank(*best), ex.rank(g))) break;
    g = *best;
  }
  return g;
}

// Tabu walk from `start`. Moves change one gene; returning a gene to a value
// it left within the last `tenure` steps is tabu unless the move beats the
// best-so-far. Stops after `patience` steps without improving the walk's own
// best, after max_steps, or when the explorer is done.
void tabu_walk(Explorer& ex, ConfigGenome start, const TabuParams& params, std::size_t patience) {
  if (params.tenure < 1) throw DataError("tabu tenure must be at least 1");
  struct TabuEntry {
    std::size_t gene;
    std::size_t value;
    std::size_t expires;
  };
  std::vector<TabuEntry> tabu;
  auto changed_gene = [&](const ConfigGenome& from, const ConfigGenome& to) {
    if (from.p != to.p) return std::pair<std::size_t, std::size_t>{0, to.p};
    if (from.q != to.q) return std::pair<std::size_t, std::size_t>{1, to.q};
    const std::uint32_t diff = from.bits ^ to.bits;
    std::size_t bit = 0;
    while (((diff >> bit) & 1U) == 0U) ++bit;
    return std::pair<std::size_t, std::size_t>{2 + bit, (to.bits >> bit) & 1U};
  };

  ConfigGenome current = start;
  ex.evaluate(current);
  CandidateRank walk_best = ex.rank(current);
  std::size_t without_improvement = 0;

  for (std::size_t step = 1; step <= params.max_steps && !ex.done(); ++step) {
    std::erase_if(tabu, [&](const TabuEntry& e) { return e.expires < step; });
    const auto before = ex.best_rank();
    auto nb = ex.neighbors(current);
    ex.evaluate(nb);

    std::optional<ConfigGenome> chosen;
    for (const auto& cand : nb) {
      const auto [gene, value] = changed_gene(current, cand);
      const bool is_tabu = std::any_of(tabu.begin(), tabu.end(), [&](const TabuEntry& e) {
        return e.gene == gene && e.value == value;
      });
      const CandidateRank r = ex.rank(cand);
      const bool aspires = before && ranks_before(r, *before);
      if (is_tabu && !aspires) continue;
      if (!chosen || ranks_before(r, ex.rank(*chosen))) chosen = cand;
    }

    if (!chosen) {
      Rng rng = ex.next_stream();
      current = ex.random_member(rng);
      ex.evaluate(current);
      tabu.clear();
    } else {
      const auto [gene, value] = changed_gene(*chosen, current);
      tabu.push_back({gene, value, step + params.tenure});
      current = *chosen;
    }

    if (ranks_before(ex.rank(current), walk_best)) {
      walk_best = ex.rank(current);
      without_improvement = 0;
    } else if (++without_improvement >= patience) {
      break;
    }
  }
}

void evaluate_everything(Explorer& ex) { ex.evaluate(ex.space().genomes); }

}  // namespace

SearchResult exhaustive_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                               CriterionKind kind, const SearchBudget& budget,
                               std::size_t workers) {
  SearchBudget unlimited = budget;
  unlimited.stagnation_limit = std::numeric_limits<std::size_t>::max();
  Explorer ex(ds, space, kind, unlimited, workers, "exhaustive");
  if (ex.space().size() > budget.max_evaluations)
    throw TooLarge("search space has " + std::to_string(ex.space().size()) +
                   " configurations, budget allows " + std::to_string(budget.max_evaluations));
  evaluate_everything(ex);
  return std::move(ex).finish();
}

SearchResult ga_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                       const SearchBudget& budget, const GaParams& params, std::size_t workers) {
  if (params.population_size < 2) throw DataError("GA population must be at least 2");
  Explorer ex(ds, space, kind, budget, workers, "ga");
  const auto& sp = ex.space();
  if (params.population_size >= sp.size()) {
    evaluate_everything(ex);
    return std::move(ex).finish();
  }

  const std::size_t length = sp.genome_length();
  const double mutation =
      params.mutation_rate > 0.0 ? params.mutation_rate : 1.0 / static_cast<double>(length);

  std::vector<ConfigGenome> population;
  {
    Rng rng = ex.next_stream();
    std::vector<std::size_t> order(sp.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < params.population_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng)]);
      population.push_back(sp.genomes[order[i]]);
    }
  }
  ex.evaluate(population);

  auto better = [&](const ConfigGenome& a, const ConfigGenome& b) {
    return ranks_before(ex.rank(a), ex.rank(b));
  };

  for (std::size_t gen = 1; gen <= params.max_generations && !ex.done(); ++gen) {
    Rng rng = ex.next_stream();
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    auto tournament = [&]() {
      const ConfigGenome& a = population[pick(rng)];
      const ConfigGenome& b = population[pick(rng)];
      return better(b, a) ? b : a;
    };

    std::vector<ConfigGenome> children;
    while (children.size() + 1 < params.population_size) {
      const ConfigGenome mother = tournament();
      const ConfigGenome father = tournament();
      ConfigGenome child = mother;
      if (unit(rng) < params.crossover_rate) {
        if (coin(rng)) child.p = father.p;
        if (coin(rng)) child.q = father.q;
        for (std::size_t i = 0; i < sp.switchable.size(); ++i) {
          const std::uint32_t bit = 1U << i;
          if (coin(rng)) child.bits = (child.bits & ~bit) | (father.bits & bit);
        }
      }
      if (unit(rng) < mutation)
        child.p = coin(rng) ? std::min(child.p + 1, sp.space.p_max) : std::max<std::size_t>(child.p - 1, 1);
      if (unit(rng) < mutation)
        child.q = coin(rng) ? std::min(child.q + 1, sp.space.q_max) : (child.q ? child.q - 1 : 0);
      for (std::size_t i = 0; i < sp.switchable.size(); ++i)
        if (unit(rng) < mutation) child.bits ^= 1U << i;
      children.push_back(child);
    }
    ex.evaluate(children);

    const ConfigGenome elite = *std::min_element(population.begin(), population.end(), better);
    population.clear();
    population.push_back(elite);
    population.insert(population.end(), children.begin(), children.end());
  }
  return std::move(ex).finish();
}

SearchResult tabu_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                         const SearchBudget& budget, const TabuParams& params,
                         std::size_t workers) {
  Explorer ex(ds, space, kind, budget, workers, "tabu");
  Rng rng = ex.next_stream();
  ConfigGenome start = ex.random_member(rng);
  if (params.start && ex.space().find(*params.start)) start = *params.start;
  tabu_walk(ex, start, params, std::numeric_limits<std::size_t>::max());
  return std::move(ex).finish();
}

SearchResult grasp_search(const TimeSeriesDataset& ds, const SearchSpace& space, CriterionKind kind,
                          const SearchBudget& budget, const GraspParams& params,
                          std::size_t workers) {
  check_alpha(params.alpha);
  Explorer ex(ds, space, kind, budget, workers, "grasp");
  for (std::size_t round = 0; round < params.max_rounds && !ex.done(); ++round) {
    Rng rng = ex.next_stream();
    local_descent(ex, grasp_construct(ex, rng, params.alpha));
  }
  return std::move(ex).finish();
}

SearchResult scatter_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                            CriterionKind kind, const SearchBudget& budget,
                            const ScatterParams& params, std::size_t workers) {
  if (params.ref_set_size < 4) throw DataError("reference set needs at least 4 members");
  Explorer ex(ds, space, kind, budget, workers, "scatter");
  const auto& sp = ex.space();
  const std::size_t b = params.ref_set_size;
  const std::size_t bits = sp.switchable.size();
  if (sp.size() <= b) {
    evaluate_everything(ex);
    return std::move(ex).finish();
  }

  auto sample_distinct = [&](Rng& rng, std::size_t count) {
    std::vector<std::size_t> order(sp.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<ConfigGenome> out;
    for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng)]);
      out.push_back(sp.genomes[order[i]]);
    }
    return out;
  };

  // Half the set by quality, the rest greedily by max-min Hamming distance.
  auto build_refset = [&](const std::vector<ConfigGenome>& pool) {
    std::vector<std::size_t> idx;
    for (const auto& g : pool)
      if (auto i = sp.find(g); i && ex.evaluated(*i)) idx.push_back(*i);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t c) { return ranks_before(ex.rank(a), ex.rank(c)); });
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    std::vector<std::size_t> ref(idx.begin(), idx.begin() + std::min(b / 2, idx.size()));
    std::vector<std::size_t> rest(idx.begin() + static_cast<std::ptrdiff_t>(ref.size()), idx.end());
    while (ref.size() < b && !rest.empty()) {
      std::size_t best_pos = 0;
      std::size_t best_dist = 0;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        std::size_t dist = std::numeric_limits<std::size_t>::max();
        for (auto r : ref) dist = std::min(dist, genome_distance(sp.genomes[rest[k]], sp.genomes[r], bits));
        if (k == 0 || dist > best_dist) {
          best_dist = dist;
          best_pos = k;
        }
      }
      ref.push_back(rest[best_pos]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }
    return ref;
  };

  std::vector<std::size_t> refset;
  std::set<std::size_t> fresh;
  {
    Rng rng = ex.next_stream();
    auto initial = sample_distinct(rng, 2 * b);
    ex.evaluate(initial);
    refset = build_refset(initial);
    fresh.insert(refset.begin(), refset.end());
  }

  for (std::size_t it = 1; it <= params.max_iterations && !ex.done(); ++it) {
    Rng rng = ex.next_stream();
    std::vector<ConfigGenome> children;
    for (std::size_t i = 0; i < refset.size(); ++i)
      for (std::size_t j = i + 1; j < refset.size(); ++j)
        if (fresh.count(refset[i]) || fresh.count(refset[j]))
          children.push_back(combine_genomes(sp.genomes[refset[i]], sp.genomes[refset[j]], rng, bits));
    ex.evaluate(children);

    std::vector<ConfigGenome> pool;
    for (auto r : refset) pool.push_back(sp.genomes[r]);
    for (const auto& child : children) {
      if (ex.done()) break;
      if (!sp.find(child)) continue;
      pool.push_back(local_descent(ex, child));
    }
    auto next = build_refset(pool);

    std::set<std::size_t> before(refset.begin(), refset.end());
    fresh.clear();
    for (auto r : next)
      if (!before.count(r)) fresh.insert(r);
    if (fresh.empty()) {
      // Stalled: keep the quality half, refill the rest with new samples.
      std::vector<ConfigGenome> diverse;
      for (std::size_t k = 0; k < std::min(b / 2, next.size()); ++k) diverse.push_back(sp.genomes[next[k]]);
      auto extra = sample_distinct(rng, b);
      ex.evaluate(extra);
      diverse.insert(diverse.end(), extra.begin(), extra.end());
      next = build_refset(diverse);
      fresh.insert(next.begin(), next.end());
    }
    refset = std::move(next);
  }
  return std::move(ex).finish();
}

SearchResult hybrid_search(const TimeSeriesDataset& ds, const SearchSpace& space,
                           CriterionKind kind, const SearchBudget& budget,
                           const HybridParams& params, std::size_t workers) {
  check_alpha(params.grasp.alpha);
  if (!(params.construction_share > 0.0 && params.construction_share < 1.0))
    throw DataError("construction share must lie in (0, 1)");
  Explorer ex(ds, space, kind, budget, workers, "hybrid");
  const auto construction_budget = static_cast<std::size_t>(
      std::ceil(params.construction_share * static_cast<double>(budget.max_evaluations)));
  std::size_t construction_used = 0;

  for (std::size_t round = 0; round < params.grasp.max_rounds && !ex.done(); ++round) {
    Rng rng = ex.next_stream();
    ConfigGenome start;
    if (construction_used < construction_budget) {
      const std::size_t before = ex.used();
      start = grasp_construct(ex, rng, params.grasp.alpha);
      construction_used += ex.used() - before;
    } else {
      start = ex.random_member(rng);
    }
    tabu_walk(ex, start, params.tabu, std::max<std::size_t>(params.round_patience, 1));
  }
  return std::move(ex).finish();
}

}  // namespace varsel
