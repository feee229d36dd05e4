//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "molbo/bench.h"
#include "molbo/error.h"
#include "molbo/run_log.h"

using namespace molbo;
namespace fs = std::filesystem;

namespace {
RunConfig join_base(int budget) {
  RunConfig c;
  c.initial_pool = { "C", "CC", "CCC", "CO", "CN", "CCO", "CCN", "C=O", "CC=C", "OCCO" };
  c.conditions = ConditionSet { Condition::kJoin };
  c.oracle = OracleKind::kJoin;
  c.objective = Objective::parse("heavy_atoms:12");
  c.budget = budget;
  return c;
}
}  // namespace

TEST_CASE("aggregate of one curve is the curve itself with zero stderr") {
  const std::vector<double> c { -5, -3, -3, -1 };
  const auto a = aggregate_curves({ c }, 3);
  CHECK(a.mean == c);
  CHECK(a.stderr_ == std::vector<double>(4, 0.0));
  CHECK(a.iterations == std::vector<int> { 0, 1, 2, 3 });
  CHECK(a.final_values == std::vector<double> { -1 });
}

TEST_CASE("aggregate mean and stderr by hand") {
  const auto a = aggregate_curves({ { 0, 1, 2 }, { 2, 3, 4 }, { 1, 2 } }, 2);
  CHECK(a.mean[0] == doctest::Approx(1.0));
  CHECK(a.mean[2] == doctest::Approx(8.0 / 3.0));
  // Column 0 is {0, 2, 1}: sd 1, stderr 1/sqrt(3).
  CHECK(a.stderr_[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
  // The short curve is padded with its last value.
  CHECK(a.final_values == std::vector<double> { 2, 4, 2 });
}

TEST_CASE("bench spec validation and method mapping") {
  BenchSpec s { { "ChemBO-ot" }, { 1, 2 }, join_base(2) };
  CHECK_THROWS_AS(s.validate(), Error);
  s.seeds.push_back(3);
  CHECK_NOTHROW(s.validate());
  s.methods = { "ChemBO-rbf" };
  CHECK_THROWS_AS(s.validate(), Error);
  s.methods = {};
  CHECK_THROWS_AS(s.validate(), Error);

  const RunConfig r = bench_run_config(join_base(2), "Rand", 5);
  CHECK(r.method == Method::kRandExplorer);
  CHECK(r.seed == 5);
  const RunConfig f = bench_run_config(join_base(2), "ChemBO-fingerprint", 6);
  CHECK(f.method == Method::kChemBO);
  CHECK(f.kernel_family == KernelFamily::kFingerprint);
}

TEST_CASE("bench aggregates are recomputable from the run logs") {
  const fs::path dir = fs::temp_directory_path() / "molbo_test_bench";
  fs::remove_all(dir);
  BenchSpec spec { { "ChemBO-sum", "Rand" }, { 0, 1, 2 }, join_base(4) };
  const auto agg = run_bench(spec, dir);
  REQUIRE(fs::exists(dir / "bench_result.json"));
  const auto from_logs = aggregate_logs(spec, dir);
  CHECK(bench_to_json(agg) == bench_to_json(from_logs));

  std::ifstream is(dir / "bench_result.json");
  const auto j = nlohmann::json::parse(is);
  CHECK(j == bench_to_json(agg));
  for (const auto &[method, a]: agg) {
    CHECK(a.mean.size() == 5);
    CHECK(std::is_sorted(a.mean.begin(), a.mean.end()));
    CHECK(a.final_values.size() == 3);
  }
  // Paired seeds: both methods start from the same initial-pool best.
  CHECK(agg.at("Rand").mean[0] == agg.at("ChemBO-sum").mean[0]);
}
