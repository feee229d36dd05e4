//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/bench.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "molbo/error.h"
#include "molbo/run_log.h"

namespace molbo {

void BenchSpec::validate() const {
  if (methods.empty())
    throw Error(ErrorCode::kInvalidConfig, "methods: at least one method required");
  for (const std::string &m: methods) {
    if (std::find(std::begin(kBenchMethods), std::end(kBenchMethods), m)
        == std::end(kBenchMethods))
      throw Error(ErrorCode::kInvalidConfig, "methods: unknown method '" + m + "'");
  }
  if (seeds.size() < 3)
    throw Error(ErrorCode::kInvalidConfig, "seeds: at least three seeds required");
  base.validate();
}

RunConfig bench_run_config(const RunConfig &base, std::string_view method, std::uint64_t seed) {
  RunConfig c = base;
  c.seed = seed;
  if (method == "Rand") {
    c.method = Method::kRandExplorer;
    return c;
  }
  constexpr std::string_view prefix = "ChemBO-";
  if (method.substr(0, prefix.size()) != prefix)
    throw Error(ErrorCode::kInvalidConfig, "methods: unknown method '" + std::string(method) + "'");
  c.method = Method::kChemBO;
  c.kernel_family = parse_kernel_family(method.substr(prefix.size()));
  return c;
}

MethodAggregate aggregate_curves(const std::vector<std::vector<double>> &curves, int budget) {
  MethodAggregate agg;
  const int len = budget + 1;
  const auto n = static_cast<double>(curves.size());
  for (int t = 0; t < len; ++t) {
    std::vector<double> col;
    for (const auto &c: curves) {
      if (c.empty())
        throw Error(ErrorCode::kInvalidConfig, "empty best-so-far curve");
      col.push_back(t < static_cast<int>(c.size()) ? c[t] : c.back());
    }
    double mean = 0;
    for (double x: col)
      mean += x;
    mean /= n;
    double ss = 0;
    for (double x: col)
      ss += (x - mean) * (x - mean);
    agg.iterations.push_back(t);
    agg.mean.push_back(mean);
    agg.stderr_.push_back(col.size() > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(n) : 0.0);
  }
  for (const auto &c: curves)
    agg.final_values.push_back(c.size() >= static_cast<std::size_t>(len) ? c[len - 1]
                                                                          : c.back());
  return agg;
}

nlohmann::json bench_to_json(const std::map<std::string, MethodAggregate> &agg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[method, a]: agg) {
    j[method] = { { "iterations", a.iterations },
                  { "mean", a.mean },
                  { "stderr", a.stderr_ },
                  { "final_values", a.final_values } };
  }
  return j;
}

std::filesystem::path bench_log_path(const std::filesystem::path &out_dir,
                                     std::string_view method, std::uint64_t seed) {
  return out_dir / (std::string(method) + "_seed" + std::to_string(seed) + ".jsonl");
}

namespace {
void write_result(const std::filesystem::path &out_dir,
                  const std::map<std::string, MethodAggregate> &agg) {
  const auto path = out_dir / "bench_result.json";
  std::ofstream os(path);
  os << bench_to_json(agg).dump(2) << '\n';
  if (!os)
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}
}  // namespace

std::map<std::string, MethodAggregate> run_bench(
    const BenchSpec &spec, const std::optional<std::filesystem::path> &out_dir) {
  spec.validate();
  if (out_dir)
    std::filesystem::create_directories(*out_dir);
  std::map<std::string, std::vector<std::vector<double>>> curves;
  std::map<std::string, MethodAggregate> agg;
  for (const std::string &method: spec.methods) {
    for (std::uint64_t seed: spec.seeds) {
      const RunConfig cfg = bench_run_config(spec.base, method, seed);
      RunResult r;
      if (out_dir) {
        const auto path = bench_log_path(*out_dir, method, seed);
        std::ofstream os(path);
        if (!os)
          throw Error(ErrorCode::kIoError, "cannot write " + path.string());
        JsonlRunLog log(os, cfg);
        r = run(cfg, &log);
        log.write_summary(r);
      } else {
        r = run(cfg);
      }
      curves[method].push_back(r.best_so_far());
      agg[method] = aggregate_curves(curves[method], spec.base.budget);
      if (out_dir)
        write_result(*out_dir, agg);
    }
  }
  return agg;
}

std::map<std::string, MethodAggregate> aggregate_logs(const BenchSpec &spec,
                                                      const std::filesystem::path &out_dir) {
  std::map<std::string, MethodAggregate> agg;
  for (const std::string &method: spec.methods) {
    std::vector<std::vector<double>> curves;
    for (std::uint64_t seed: spec.seeds)
      curves.push_back(read_run_log_file(bench_log_path(out_dir, method, seed)).best_so_far());
    agg[method] = aggregate_curves(curves, spec.base.budget);
  }
  return agg;
}

}  // namespace molbo
