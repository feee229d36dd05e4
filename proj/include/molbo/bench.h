//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_BENCH_H_
#define MOLBO_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "molbo/optimizer.h"

namespace molbo {

/// Method labels: "ChemBO-fingerprint", "ChemBO-ot", "ChemBO-sum", "Rand".
inline constexpr std::string_view kBenchMethods[] = { "ChemBO-fingerprint", "ChemBO-ot",
                                                      "ChemBO-sum", "Rand" };

struct BenchSpec {
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  RunConfig base;

  /// At least one known method and three seeds.
  void validate() const;
};

/// `base` with method, kernel family and seed set for one bench cell.
RunConfig bench_run_config(const RunConfig &base, std::string_view method, std::uint64_t seed);

struct MethodAggregate {
  std::vector<int> iterations;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> final_values;
};

/// Curves shorter than budget + 1 (a stalled run) are extended with their
/// last value. stderr is the sample standard deviation over sqrt(n), 0 for
/// a single curve.
MethodAggregate aggregate_curves(const std::vector<std::vector<double>> &curves, int budget);

nlohmann::json bench_to_json(const std::map<std::string, MethodAggregate> &agg);

/// Runs every (method, seed) cell in order. With `out_dir`, each run writes
/// <method>_seed<k>.jsonl there and bench_result.json is rewritten after
/// every completed run.
std::map<std::string, MethodAggregate> run_bench(
    const BenchSpec &spec, const std::optional<std::filesystem::path> &out_dir = std::nullopt);

/// Recomputes the aggregate from the run logs written by run_bench.
std::map<std::string, MethodAggregate> aggregate_logs(const BenchSpec &spec,
                                                      const std::filesystem::path &out_dir);

std::filesystem::path bench_log_path(const std::filesystem::path &out_dir,
                                     std::string_view method, std::uint64_t seed);

}  // namespace molbo

#endif  // MOLBO_BENCH_H_
