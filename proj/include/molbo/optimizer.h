//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_OPTIMIZER_H_
#define MOLBO_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "molbo/acquisition.h"
#include "molbo/kernel.h"
#include "molbo/objectives.h"
#include "molbo/synthesis.h"

namespace molbo {

enum class Method : std::uint8_t { kChemBO, kRandExplorer };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct RunConfig {
  std::vector<std::string> initial_pool;
  ConditionSet conditions { Condition::kAcidCat, Condition::kBase, Condition::kHeat,
                            Condition::kPdCat,   Condition::kNeat, Condition::kJoin };
  OracleKind oracle = OracleKind::kTemplate;
  Objective objective;
  KernelFamily kernel_family = KernelFamily::kOt;
  int budget = 30;
  int explorer_steps = 20;
  std::uint64_t seed = 0;
  Method method = Method::kChemBO;
  /// Wall-clock timings in records; off by default so logs are
  /// byte-reproducible.
  bool record_timing = false;

  /// Throws kInvalidConfig naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep the values already in `base`.
  static RunConfig from_json(const nlohmann::json &j, RunConfig base);
  static RunConfig from_json(const nlohmann::json &j);
};

struct EvaluationRecord {
  int iteration;
  std::string molecule;
  double value;
  std::optional<AcquisitionKind> acquisition;
  int pool_size_after;
  std::int64_t wall_ms;
};

struct InitialEvaluation {
  std::string molecule;
  double value;
};

struct RunResult {
  std::vector<InitialEvaluation> initial;
  std::vector<EvaluationRecord> records;
  std::string best_molecule;
  double best_value;
  SynthesisDag dag;
  bool stalled = false;
  int fit_fallbacks = 0;

  int evaluations() const {
    return static_cast<int>(initial.size() + records.size());
  }
  /// best_so_far[t] is the best value after t BO evaluations (index 0 is the
  /// initial-pool best).
  std::vector<double> best_so_far() const;
};

/// Receives run events as they happen (for incremental logging).
class RunObserver {
public:
  virtual ~RunObserver() = default;
  virtual void on_node(const SynthesisNode &) { }
  virtual void on_initial(const InitialEvaluation &) { }
  virtual void on_evaluation(const EvaluationRecord &) { }
};

/// Persistent molecule pool plus synthesis graph shared by all explorer
/// calls of a run.
class Explorer {
public:
  Explorer(const std::vector<Molecule> &pool, ConditionSet library, OracleKind oracle,
           RunObserver *observer = nullptr);

  struct Outcome {
    int successes = 0;
    bool stalled = false;
    /// Canonical forms added to the pool, in insertion order.
    std::vector<std::string> added;
  };

  /// Runs Rand-Select draws until `n` successful reactions (some product
  /// outside pool and `past`) or 100 n consecutive failures. `on_success`
  /// sees the forms added by each successful step and may return false to
  /// stop early.
  Outcome explore(const std::set<std::string, std::less<>> &past, int n,
                  std::mt19937_64 &rng,
                  const std::function<bool(const std::vector<std::string> &)> &on_success = {});

  const std::vector<Molecule> &pool() const { return pool_; }
  bool in_pool(std::string_view canonical) const;
  const SynthesisDag &dag() const { return dag_; }
  int steps() const { return step_; }

private:
  std::vector<Molecule> pool_;
  std::set<std::string, std::less<>> pool_forms_;
  ConditionSet library_;
  std::vector<Condition> library_list_;
  OracleKind oracle_;
  RunObserver *observer_;
  SynthesisDag dag_;
  int step_ = 0;
};

struct ExploreAcquisitionResult {
  Explorer::Outcome outcome;
  /// Pool index of the argmax; nullopt if every pool molecule is in `past`.
  std::optional<int> best;
};

/// Explores, then maximizes `scorer` over pool molecules not in `past`.
/// Ties go to the smallest canonical form.
ExploreAcquisitionResult explore_acquisition(
    Explorer &explorer, const std::set<std::string, std::less<>> &past, int n,
    const std::function<std::vector<double>(const std::vector<int> &)> &scorer,
    std::mt19937_64 &rng);

RunResult chembo_run(const RunConfig &cfg, RunObserver *observer = nullptr);
RunResult rand_run(const RunConfig &cfg, RunObserver *observer = nullptr);
/// Dispatches on cfg.method.
RunResult run(const RunConfig &cfg, RunObserver *observer = nullptr);

}  // namespace molbo

#endif  // MOLBO_OPTIMIZER_H_
