//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/optimizer.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "molbo/error.h"
#include "molbo/gp.h"
#include "molbo/smiles.h"

namespace molbo {
namespace {
// Independent generator streams per seed. The exploration stream is shared
// by construction between methods, which pairs runs with equal seeds.
enum class Stream : std::uint32_t { kExplore = 1, kAcquisition = 2, kFit = 3 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream s) {
  std::seed_seq seq { static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s) };
  return std::mt19937_64(seq);
}

std::vector<Molecule> parse_pool(const std::vector<std::string> &smiles) {
  std::vector<Molecule> pool;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    try {
      Molecule m = parse_smiles(smiles[i]);
      if (seen.insert(m.canonical_form()).second)
        pool.push_back(std::move(m));
    } catch (const Error &e) {
      throw Error(e.code(), "initial_pool[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return pool;
}

class Stopwatch {
public:
  explicit Stopwatch(bool enabled)
      : enabled_(enabled), start_(std::chrono::steady_clock::now()) { }
  std::int64_t elapsed_ms() const {
    if (!enabled_)
      return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

// Shared state of both methods: evaluated set, running best and records.
struct Evaluations {
  const Objective &objective;
  RunObserver *observer;
  RunResult result;
  std::set<std::string, std::less<>> evaluated;
  std::vector<const Molecule *> molecules;

  double evaluate_initial(const Molecule &m) {
    const double v = evaluate(objective, m);
    InitialEvaluation e { m.canonical_form(), v };
    track(m, v);
    result.initial.push_back(e);
    if (observer)
      observer->on_initial(e);
    return v;
  }

  bool evaluate_step(const Molecule &m, std::optional<AcquisitionKind> kind, int pool_size,
                     const Stopwatch &clock) {
    const double v = evaluate(objective, m);
    const bool improved = v > result.best_value;
    track(m, v);
    EvaluationRecord r { static_cast<int>(result.records.size()) + 1,
                         m.canonical_form(),
                         v,
                         kind,
                         pool_size,
                         clock.elapsed_ms() };
    result.records.push_back(r);
    if (observer)
      observer->on_evaluation(r);
    return improved;
  }

  void track(const Molecule &m, double v) {
    if (!evaluated.insert(m.canonical_form()).second)
      throw Error(ErrorCode::kInvalidStructure,
                  "molecule evaluated twice: " + m.canonical_form());
    if (result.best_molecule.empty() || v > result.best_value
        || (v == result.best_value && m.canonical_form() < result.best_molecule)) {
      result.best_value = v;
      result.best_molecule = m.canonical_form();
    }
  }
};

Evaluations start_run(const RunConfig &cfg, const std::vector<Molecule> &pool,
                      RunObserver *observer) {
  Evaluations ev { cfg.objective, observer, {}, {}, {} };
  ev.result.best_value = -std::numeric_limits<double>::infinity();
  for (const Molecule &m: pool)
    ev.evaluate_initial(m);
  return ev;
}
}  // namespace

std::string_view method_name(Method m) {
  return m == Method::kChemBO ? "chembo" : "rand";
}

Method parse_method(std::string_view name) {
  if (name == "chembo")
    return Method::kChemBO;
  if (name == "rand")
    return Method::kRandExplorer;
  throw Error(ErrorCode::kInvalidConfig,
              "method: expected chembo or rand, got '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (budget < 0)
    throw Error(ErrorCode::kInvalidConfig, "budget: must be >= 0");
  if (explorer_steps < 1)
    throw Error(ErrorCode::kInvalidConfig, "explorer_steps: must be >= 1");
  if (initial_pool.size() < 2)
    throw Error(ErrorCode::kInvalidConfig, "initial_pool: needs at least 2 molecules");
  if (conditions.empty())
    throw Error(ErrorCode::kInvalidConfig, "conditions: library is empty");
}

nlohmann::json RunConfig::to_json() const {
  return { { "initial_pool", initial_pool },
           { "conditions", conditions.names() },
           { "oracle", oracle_name(oracle) },
           { "objective", objective.name() },
           { "objective_config", objective.tables.to_json() },
           { "kernel", kernel_family_name(kernel_family) },
           { "budget", budget },
           { "explorer_steps", explorer_steps },
           { "seed", seed },
           { "method", method_name(method) },
           { "record_timing", record_timing } };
}

RunConfig RunConfig::from_json(const nlohmann::json &j, RunConfig base) {
  RunConfig c = std::move(base);
  auto field = [&](const char *key) -> const nlohmann::json * {
    return j.contains(key) ? &j.at(key) : nullptr;
  };
  try {
    if (!j.is_object())
      throw Error(ErrorCode::kInvalidConfig, "config: expected a JSON object");
    for (const auto &[key, v]: j.items()) {
      static const std::set<std::string> known = {
        "initial_pool", "conditions", "oracle", "objective", "objective_config",
        "kernel", "budget", "explorer_steps", "seed", "method", "record_timing"
      };
      if (!known.count(key))
        throw Error(ErrorCode::kInvalidConfig, "config: unknown field '" + key + "'");
    }
    if (auto *v = field("initial_pool"))
      c.initial_pool = v->get<std::vector<std::string>>();
    if (auto *v = field("conditions")) {
      c.conditions = {};
      for (const auto &name: *v)
        c.conditions.insert(parse_condition(name.get<std::string>()));
    }
    if (auto *v = field("oracle"))
      c.oracle = parse_oracle(v->get<std::string>());
    if (auto *v = field("objective")) {
      const ObjectiveTables tables = c.objective.tables;
      c.objective = Objective::parse(v->get<std::string>());
      c.objective.tables = tables;
    }
    if (auto *v = field("objective_config"))
      c.objective.tables = ObjectiveTables::from_json(*v);
    if (auto *v = field("kernel"))
      c.kernel_family = parse_kernel_family(v->get<std::string>());
    if (auto *v = field("budget"))
      c.budget = v->get<int>();
    if (auto *v = field("explorer_steps"))
      c.explorer_steps = v->get<int>();
    if (auto *v = field("seed"))
      c.seed = v->get<std::uint64_t>();
    if (auto *v = field("method"))
      c.method = parse_method(v->get<std::string>());
    if (auto *v = field("record_timing"))
      c.record_timing = v->get<bool>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::from_json(const nlohmann::json &j) {
  return from_json(j, RunConfig {});
}

std::vector<double> RunResult::best_so_far() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &e: initial)
    best = std::max(best, e.value);
  std::vector<double> out { best };
  for (const auto &r: records) {
    best = std::max(best, r.value);
    out.push_back(best);
  }
  return out;
}

Explorer::Explorer(const std::vector<Molecule> &pool, ConditionSet library,
                   OracleKind oracle, RunObserver *observer)
    : library_(library), library_list_(library.members()), oracle_(oracle),
      observer_(observer) {
  for (const Molecule &m: pool) {
    if (!pool_forms_.insert(m.canonical_form()).second)
      continue;
    pool_.push_back(m);
    dag_.add_initial(m);
    if (observer_)
      observer_->on_node(dag_.node(m.canonical_form()));
  }
}

bool Explorer::in_pool(std::string_view canonical) const {
  return pool_forms_.find(canonical) != pool_forms_.end();
}

Explorer::Outcome Explorer::explore(
    const std::set<std::string, std::less<>> &past, int n, std::mt19937_64 &rng,
    const std::function<bool(const std::vector<std::string> &)> &on_success) {
  Outcome out;
  if (pool_.empty() || library_list_.empty()) {
    out.stalled = true;
    return out;
  }
  const long long max_failures = 100LL * n;
  long long failures = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (out.successes < n) {
    // Rand-Select: two reagents with probability 0.8, otherwise one; one or
    // two conditions with equal probability.
    const bool pair = unit(rng) < 0.8;
    const int k = pair && pool_.size() >= 2 ? 2 : 1;
    std::vector<int> picks;
    while (static_cast<int>(picks.size()) < k) {
      const int i = std::uniform_int_distribution<int>(
          0, static_cast<int>(pool_.size()) - 1)(rng);
      if (std::find(picks.begin(), picks.end(), i) == picks.end())
        picks.push_back(i);
    }
    const int qsize = std::min<int>(unit(rng) < 0.5 ? 1 : 2,
                                    static_cast<int>(library_list_.size()));
    ConditionSet q;
    std::vector<int> cidx(library_list_.size());
    std::iota(cidx.begin(), cidx.end(), 0);
    for (int c = 0; c < qsize; ++c) {
      const int j = std::uniform_int_distribution<int>(
          c, static_cast<int>(cidx.size()) - 1)(rng);
      std::swap(cidx[c], cidx[j]);
      q.insert(library_list_[cidx[c]]);
    }

    std::vector<Molecule> reagents;
    for (int i: picks)
      reagents.push_back(pool_[i]);
    const auto result = synthesize(reagents, q, oracle_);
    std::vector<const Molecule *> fresh;
    if (result) {
      for (const Molecule &m: result->products) {
        if (!in_pool(m.canonical_form()) && !past.count(m.canonical_form()))
          fresh.push_back(&m);
      }
    }
    if (fresh.empty()) {
      if (++failures >= max_failures) {
        out.stalled = true;
        break;
      }
      continue;
    }
    failures = 0;
    ++out.successes;
    ++step_;
    std::vector<std::string> parents;
    for (int slot: result->reagents_used)
      parents.push_back(reagents[slot].canonical_form());
    const auto recorded =
        dag_.record(result->products, parents, result->template_name, q, step_);
    if (observer_) {
      for (const std::string &f: recorded)
        observer_->on_node(dag_.node(f));
    }
    std::vector<std::string> added;
    for (const Molecule *m: fresh) {
      pool_forms_.insert(m->canonical_form());
      pool_.push_back(*m);
      added.push_back(m->canonical_form());
    }
    out.added.insert(out.added.end(), added.begin(), added.end());
    if (on_success && !on_success(added))
      break;
  }
  return out;
}

ExploreAcquisitionResult explore_acquisition(
    Explorer &explorer, const std::set<std::string, std::less<>> &past, int n,
    const std::function<std::vector<double>(const std::vector<int> &)> &scorer,
    std::mt19937_64 &rng) {
  ExploreAcquisitionResult r;
  r.outcome = explorer.explore(past, n, rng);
  std::vector<int> cand;
  for (int i = 0; i < static_cast<int>(explorer.pool().size()); ++i) {
    if (!past.count(explorer.pool()[i].canonical_form()))
      cand.push_back(i);
  }
  if (cand.empty())
    return r;
  const std::vector<double> scores = scorer(cand);
  int best = -1;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    if (best < 0) {
      best = static_cast<int>(k);
      continue;
    }
    const double s = scores[k], b = scores[best];
    const bool tie = s == b;
    if (s > b
        || (tie
            && explorer.pool()[cand[k]].canonical_form()
                   < explorer.pool()[cand[best]].canonical_form()))
      best = static_cast<int>(k);
  }
  r.best = cand[best];
  return r;
}

RunResult chembo_run(const RunConfig &cfg, RunObserver *observer) {
  cfg.validate();
  const Stopwatch clock(cfg.record_timing);
  const std::vector<Molecule> pool = parse_pool(cfg.initial_pool);
  Explorer explorer(pool, cfg.conditions, cfg.oracle, observer);
  Evaluations ev = start_run(cfg, pool, observer);

  std::mt19937_64 explore_rng = make_stream(cfg.seed, Stream::kExplore);
  std::mt19937_64 acq_rng = make_stream(cfg.seed, Stream::kAcquisition);
  std::mt19937_64 fit_rng = make_stream(cfg.seed, Stream::kFit);

  SimilarityCache cache;
  AcquisitionEnsemble ensemble;
  std::optional<GpHyperparams> previous;
  std::vector<int> train_ids;
  std::vector<double> train_y;
  for (const Molecule &m: pool)
    train_ids.push_back(cache.intern(m));
  for (const auto &e: ev.result.initial)
    train_y.push_back(e.value);

  for (int t = 1; t <= cfg.budget; ++t) {
    GpHyperparams hyper;
    const std::uint64_t fit_seed = fit_rng();
    if (train_ids.size() >= 3) {
      try {
        hyper = fit(cache, train_ids, train_y, cfg.kernel_family, { .seed = fit_seed });
        previous = hyper;
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kFitFailure)
          throw;
        ++ev.result.fit_fallbacks;
        hyper = previous.value_or(GpHyperparams { default_kernel(cfg.kernel_family) });
      }
    } else {
      hyper.kernel = default_kernel(cfg.kernel_family);
      hyper.mean_const =
          std::accumulate(train_y.begin(), train_y.end(), 0.0) / train_y.size();
    }
    const GpPosterior posterior(cache, train_ids, train_y, hyper);
    const AcquisitionKind kind = ensemble.pick(acq_rng);

    auto scorer = [&](const std::vector<int> &cand) {
      std::vector<int> ids;
      ids.reserve(cand.size());
      for (int i: cand)
        ids.push_back(cache.intern(explorer.pool()[i]));
      const auto preds = posterior.predict(ids);
      return acquisition_scores(kind, preds, ev.result.best_value, t, acq_rng);
    };
    ExploreAcquisitionResult pick =
        explore_acquisition(explorer, ev.evaluated, cfg.explorer_steps, scorer, explore_rng);
    // Everything in the pool may already be evaluated; keep exploring.
    for (int extra = 0; !pick.best && !pick.outcome.stalled && extra < 10; ++extra)
      pick = explore_acquisition(explorer, ev.evaluated, cfg.explorer_steps, scorer,
                                 explore_rng);
    ev.result.stalled = ev.result.stalled || pick.outcome.stalled;
    if (!pick.best)
      break;

    const Molecule &chosen = explorer.pool()[*pick.best];
    const bool improved = ev.evaluate_step(
        chosen, kind, static_cast<int>(explorer.pool().size()), clock);
    ensemble.update(kind, improved);
    train_ids.push_back(cache.intern(chosen));
    train_y.push_back(ev.result.records.back().value);
  }
  ev.result.dag = explorer.dag();
  return std::move(ev.result);
}

RunResult rand_run(const RunConfig &cfg, RunObserver *observer) {
  cfg.validate();
  const Stopwatch clock(cfg.record_timing);
  const std::vector<Molecule> pool = parse_pool(cfg.initial_pool);
  Explorer explorer(pool, cfg.conditions, cfg.oracle, observer);
  Evaluations ev = start_run(cfg, pool, observer);
  std::mt19937_64 explore_rng = make_stream(cfg.seed, Stream::kExplore);

  int remaining = cfg.budget;
  // Every new product is evaluated as soon as it appears, until the budget
  // is spent.
  auto on_success = [&](const std::vector<std::string> &added) {
    for (const std::string &form: added) {
      if (remaining == 0)
        break;
      const auto it = std::find_if(explorer.pool().rbegin(), explorer.pool().rend(),
                                   [&](const Molecule &m) { return m.canonical_form() == form; });
      ev.evaluate_step(*it, std::nullopt, static_cast<int>(explorer.pool().size()), clock);
      --remaining;
    }
    return remaining > 0;
  };
  while (remaining > 0) {
    const auto out = explorer.explore(ev.evaluated, cfg.explorer_steps, explore_rng, on_success);
    if (out.stalled) {
      ev.result.stalled = true;
      break;
    }
  }
  ev.result.dag = explorer.dag();
  return std::move(ev.result);
}

RunResult run(const RunConfig &cfg, RunObserver *observer) {
  return cfg.method == Method::kChemBO ? chembo_run(cfg, observer)
                                       : rand_run(cfg, observer);
}

}  // namespace molbo
