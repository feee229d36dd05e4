//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "molbo/bench.h"
#include "molbo/kernel.h"
#include "molbo/objectives.h"
#include "molbo/optimizer.h"
#include "molbo/otdist.h"
#include "molbo/parallel.h"
#include "molbo/run_log.h"
#include "molbo/smiles.h"

namespace molbo {
namespace {
using nlohmann::json;

// Shortest text that parses back to the same double.
std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json read_json_file(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::kIoError, "cannot open config file " + path);
  try {
    return json::parse(is);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

std::vector<std::string> pool_smiles(const std::string &path) {
  std::vector<std::string> out;
  for (const Molecule &m: read_pool_file(path))
    out.push_back(m.canonical_form());
  return out;
}

// Options shared by the run-style subcommands. Flags that were not given
// stay empty so that a config file can supply them.
struct RunFlags {
  std::string config;
  std::string pool;
  std::string objective;
  std::string kernel;
  std::string oracle;
  std::string method;
  std::optional<int> budget;
  std::optional<int> explorer_steps;
  std::optional<std::uint64_t> seed;
  std::string out;

  void add_to(CLI::App *app, bool with_run_options) {
    app->add_option("--config", config, "JSON config; flags take precedence");
    app->add_option("--pool", pool, "Initial pool file, one SMILES per line");
    app->add_option("--oracle", oracle, "template or join");
    app->add_option("--explorer-steps", explorer_steps, "Explorer steps per iteration");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--out", out, "Output file");
    if (with_run_options) {
      app->add_option("--objective", objective, "heavy_atoms:<n>, logp, pen_logp or qed");
      app->add_option("--kernel", kernel, "fingerprint, ot or sum");
      app->add_option("--budget", budget, "Number of BO evaluations");
      app->add_option("--method", method, "chembo or rand");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg;
    bool has_seed = seed.has_value();
    if (!config.empty()) {
      const json j = read_json_file(config);
      cfg = RunConfig::from_json(j, cfg);
      has_seed = has_seed || (j.is_object() && j.contains("seed"));
    }
    if (!pool.empty())
      cfg.initial_pool = pool_smiles(pool);
    if (!objective.empty()) {
      const ObjectiveTables tables = cfg.objective.tables;
      cfg.objective = Objective::parse(objective);
      cfg.objective.tables = tables;
    }
    if (!kernel.empty())
      cfg.kernel_family = parse_kernel_family(kernel);
    if (!oracle.empty())
      cfg.oracle = parse_oracle(oracle);
    if (!method.empty())
      cfg.method = parse_method(method);
    if (budget)
      cfg.budget = *budget;
    if (explorer_steps)
      cfg.explorer_steps = *explorer_steps;
    if (seed)
      cfg.seed = *seed;
    if (!has_seed)
      throw Error(ErrorCode::kInvalidConfig, "seed: required (--seed or config)");
    if (cfg.initial_pool.empty())
      throw Error(ErrorCode::kInvalidConfig, "initial_pool: required (--pool or config)");
    cfg.validate();
    return cfg;
  }
};

int cmd_dist(const std::string &a, const std::string &b, std::ostream &out) {
  const DistanceVector d = distance_vector(parse_smiles(a), parse_smiles(b));
  json j = { { "distances", d }, { "config_order", kDistanceConfigNames } };
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_gram(const std::string &pool, const std::string &kernel, std::ostream &out) {
  const std::vector<Molecule> mols = read_pool_file(pool);
  const KernelSpec spec = default_kernel(parse_kernel_family(kernel));
  const GramMatrix g = gram(mols, spec);
  for (std::size_t i = 0; i < mols.size(); ++i)
    out << (i ? "," : "") << mols[i].canonical_form();
  out << '\n';
  for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
    for (Eigen::Index k = 0; k < g.values.cols(); ++k)
      out << (k ? "," : "") << format_double(g.values(i, k));
    out << '\n';
  }
  return kExitOk;
}

int cmd_optimize(const RunFlags &flags, std::ostream &out, std::ostream &err) {
  const RunConfig cfg = flags.resolve();
  const std::string path = flags.out.empty() ? "run.jsonl" : flags.out;
  std::ofstream os(path);
  if (!os)
    throw Error(ErrorCode::kIoError, "cannot write run log " + path);
  JsonlRunLog log(os, cfg);
  const RunResult r = run(cfg, &log);
  log.write_summary(r);
  if (r.stalled)
    err << "warning: exploration stalled; " << r.records.size() << " of " << cfg.budget
        << " evaluations done\n";
  if (r.fit_fallbacks > 0)
    err << "warning: " << r.fit_fallbacks << " GP fits fell back to earlier hyperparameters\n";
  const json summary = { { "best_value", r.best_value },
                         { "best_molecule", r.best_molecule },
                         { "evaluations", r.evaluations() } };
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_explore(const RunFlags &flags, std::ostream &out) {
  RunConfig cfg = flags.resolve();
  std::vector<Molecule> pool;
  for (const std::string &s: cfg.initial_pool)
    pool.push_back(parse_smiles(s));
  Explorer ex(pool, cfg.conditions, cfg.oracle);
  std::mt19937_64 rng(cfg.seed);
  const auto outcome = ex.explore({}, cfg.explorer_steps, rng);
  if (!flags.out.empty()) {
    std::ofstream os(flags.out);
    os << ex.dag().to_json().dump(2) << '\n';
    if (!os)
      throw Error(ErrorCode::kIoError, "cannot write " + flags.out);
  }
  const json j = { { "added", outcome.added },
                   { "successes", outcome.successes },
                   { "stalled", outcome.stalled },
                   { "pool_size", ex.pool().size() } };
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_analyze(const std::string &pool_path, const std::string &objective_spec,
                const std::string &config, int pairs, std::uint64_t seed, std::ostream &out) {
  if (pairs < 1)
    throw Error(ErrorCode::kInvalidConfig, "pairs: must be >= 1");
  Objective objective = Objective::parse(objective_spec);
  if (!config.empty()) {
    const json j = read_json_file(config);
    if (j.contains("objective_config"))
      objective.tables = ObjectiveTables::from_json(j.at("objective_config"));
  }
  const std::vector<Molecule> mols = read_pool_file(pool_path);
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < static_cast<int>(mols.size()); ++i) {
    for (int k = i + 1; k < static_cast<int>(mols.size()); ++k)
      all.emplace_back(i, k);
  }
  if (static_cast<std::size_t>(pairs) < all.size()) {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < pairs; ++s) {
      const auto j = std::uniform_int_distribution<std::size_t>(s, all.size() - 1)(rng);
      std::swap(all[s], all[j]);
    }
    all.resize(pairs);
    std::sort(all.begin(), all.end());
  }
  std::vector<double> values(mols.size());
  for (std::size_t i = 0; i < mols.size(); ++i)
    values[i] = evaluate(objective, mols[i]);
  std::vector<OtSignature> sigs;
  for (const Molecule &m: mols)
    sigs.emplace_back(m);
  std::vector<DistanceVector> dist(all.size());
  parallel_for(all.size(), [&](std::size_t p) {
    dist[p] = distance_vector(sigs[all[p].first], sigs[all[p].second]);
  });
  out << "distance_unit_raw,distance_unit_norm,distance_mass_raw,distance_mass_norm,"
         "abs_objective_diff\n";
  for (std::size_t p = 0; p < all.size(); ++p) {
    for (double d: dist[p])
      out << format_double(d) << ',';
    out << format_double(std::abs(values[all[p].first] - values[all[p].second])) << '\n';
  }
  return kExitOk;
}

int cmd_recipe(const std::string &file, const std::string &smiles, std::ostream &out) {
  const SynthesisDag dag = load_dag_file(file);
  const std::string target = parse_smiles(smiles).canonical_form();
  const Recipe recipe = dag.recipe(target);
  const json j = { { "recipe", recipe_to_json(recipe) },
                   { "graph", recipe_to_graph_text(recipe) } };
  out << j.dump(2) << '\n';
  return kExitOk;
}

// CLI11 consumes arguments from the back.
std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

template <class Body>
int guarded(std::ostream &err, Body &&body) {
  try {
    return body();
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::kUnknownMolecule:
    return kExitNotFound;
  case ErrorCode::kSolverFailure:
  case ErrorCode::kEigenFailure:
  case ErrorCode::kCholeskyFailure:
  case ErrorCode::kFitFailure:
    return kExitSolver;
  default:
    return kExitInput;
  }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app { "Synthesis-aware Bayesian optimization over molecules", "molbo" };
  app.require_subcommand(1);

  std::string a, b;
  auto *dist = app.add_subcommand("dist", "Four OT dissimilarities between two molecules");
  dist->add_option("a", a, "First SMILES")->required();
  dist->add_option("b", b, "Second SMILES")->required();

  std::string gram_pool, gram_kernel = "ot";
  auto *gram_cmd = app.add_subcommand("gram", "Kernel matrix of a pool as CSV");
  gram_cmd->add_option("--pool", gram_pool, "Pool file")->required();
  gram_cmd->add_option("--kernel", gram_kernel, "fingerprint, ot or sum");

  RunFlags opt_flags;
  auto *optimize = app.add_subcommand("optimize", "Run ChemBO or the random explorer");
  opt_flags.add_to(optimize, true);

  RunFlags exp_flags;
  auto *explore = app.add_subcommand("explore", "Grow a pool with random reactions");
  exp_flags.add_to(explore, false);

  std::string an_pool, an_objective = "qed", an_config;
  int an_pairs = 100;
  std::uint64_t an_seed = 0;
  auto *analyze = app.add_subcommand("analyze", "Distance vs objective difference pairs as CSV");
  analyze->add_option("--pool", an_pool, "Pool file")->required();
  analyze->add_option("--objective", an_objective, "Objective");
  analyze->add_option("--pairs", an_pairs, "Number of sampled unordered pairs");
  analyze->add_option("--seed", an_seed, "Sampling seed");
  analyze->add_option("--config", an_config, "JSON with objective_config");

  std::string rec_file, rec_smiles;
  auto *recipe = app.add_subcommand("recipe", "Synthesis recipe for a molecule");
  recipe->add_option("file", rec_file, "Run log (JSONL) or synthesis graph (JSON)")->required();
  recipe->add_option("molecule", rec_smiles, "Target SMILES")->required();

  try {
    app.parse(reversed(args));
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    for (auto *sub: app.get_subcommands())
      err << sub->help();
    return kExitInput;
  }

  return guarded(err, [&] {
    if (*dist)
      return cmd_dist(a, b, out);
    if (*gram_cmd)
      return cmd_gram(gram_pool, gram_kernel, out);
    if (*optimize)
      return cmd_optimize(opt_flags, out, err);
    if (*explore)
      return cmd_explore(exp_flags, out);
    if (*analyze)
      return cmd_analyze(an_pool, an_objective, an_config, an_pairs, an_seed, out);
    return cmd_recipe(rec_file, rec_smiles, out);
  });
}

int run_bench_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app { "ChemBO vs random explorer over paired seeds", "molbo_bench" };
  RunFlags flags;
  flags.add_to(&app, true);
  std::vector<std::string> methods(std::begin(kBenchMethods), std::end(kBenchMethods));
  int num_seeds = 5;
  app.add_option("--methods", methods, "Subset of ChemBO-fingerprint ChemBO-ot ChemBO-sum Rand");
  app.add_option("--seeds", num_seeds, "Seeds 0..n-1 (base seed added)");
  try {
    app.parse(reversed(args));
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitInput;
  }
  return guarded(err, [&] {
    if (!flags.seed)
      flags.seed = 0;
    BenchSpec spec;
    spec.base = flags.resolve();
    spec.methods = methods;
    for (int s = 0; s < num_seeds; ++s)
      spec.seeds.push_back(spec.base.seed + s);
    const std::string dir = flags.out.empty() ? "bench_out" : flags.out;
    const auto agg = run_bench(spec, dir);
    err << "wrote " << dir << "/bench_result.json\n";
    out << bench_to_json(agg).dump() << '\n';
    return kExitOk;
  });
}

}  // namespace molbo
