//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "molbo/cli.h"
#include "molbo/run_log.h"
#include "molbo/smiles.h"
#include "test_util.h"

using namespace molbo;
namespace fs = std::filesystem;

namespace {
struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return { code, out.str(), err.str() };
}

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("molbo_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_lines(const std::string &text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    lines.push_back(line);
  return lines;
}

const std::string kJoinPool = testing::data_path("join_pool.smi");
}  // namespace

TEST_CASE("dist emits the four distances in fixed order") {
  auto same = cli({ "dist", "C", "C" });
  REQUIRE(same.code == 0);
  const auto j = nlohmann::json::parse(same.out);
  CHECK(j["config_order"]
        == nlohmann::json({ "unit_raw", "unit_norm", "mass_raw", "mass_norm" }));
  for (double d: j["distances"])
    CHECK(d == 0.0);

  auto diff = cli({ "dist", "CC", "C" });
  REQUIRE(diff.code == 0);
  for (double d: nlohmann::json::parse(diff.out)["distances"])
    CHECK(d > 0.0);

  auto bad = cli({ "dist", "C1CC", "C" });
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("argument errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({ "frobnicate" }).code == 2);
  CHECK(cli({ "dist", "C" }).code == 2);
  CHECK(cli({ "optimize", "--bogus", "1" }).code == 2);
  CHECK(cli({ "--help" }).code == 0);
}

TEST_CASE("gram prints a symmetric csv with canonical-form header") {
  const auto r = cli({ "gram", "--pool", kJoinPool, "--kernel", "fingerprint" });
  REQUIRE(r.code == 0);
  const auto lines = csv_lines(r.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0].find(parse_smiles("OCCO").canonical_form()) != std::string::npos);
  std::vector<std::vector<double>> m;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<double> row;
    std::istringstream is(lines[i]);
    std::string cell;
    while (std::getline(is, cell, ','))
      row.push_back(std::stod(cell));
    CHECK(row.size() == 10);
    m.push_back(row);
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(m[i][i] == doctest::Approx(1.0));
    for (int k = 0; k < 10; ++k)
      CHECK(m[i][k] == m[k][i]);
  }
}

TEST_CASE("optimize writes a reproducible log and a summary") {
  const fs::path dir = scratch_dir("optimize");
  const std::vector<std::string> base = { "optimize",  "--pool",   kJoinPool, "--oracle",
                                          "join",      "--objective", "heavy_atoms:25",
                                          "--budget",  "4",        "--seed",  "9" };
  auto with_out = [&](const std::string &name) {
    auto args = base;
    args.push_back("--out");
    args.push_back((dir / name).string());
    return cli(args);
  };
  const auto a = with_out("a.jsonl");
  const auto b = with_out("b.jsonl");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  const auto summary = nlohmann::json::parse(a.out);
  CHECK(summary["evaluations"] == 14);
  const RunLog log = read_run_log_file(dir / "a.jsonl");
  CHECK(log.records.size() == 4);
  CHECK(summary["best_value"] == log.best_so_far().back());

  // Budget zero: the best is the initial-pool maximum.
  auto zero = base;
  zero[8] = "0";
  zero.push_back("--out");
  zero.push_back((dir / "zero.jsonl").string());
  const auto z = cli(zero);
  REQUIRE(z.code == 0);
  CHECK(nlohmann::json::parse(z.out)["best_value"] == -21.0);

  // Config file supplies what flags leave out; flags win over the file.
  std::ofstream(dir / "cfg.json") << R"({"oracle": "join", "objective": "heavy_atoms:25",
      "budget": 2, "seed": 9, "conditions": ["join"]})";
  const auto c = cli({ "optimize", "--config", (dir / "cfg.json").string(), "--pool", kJoinPool,
                       "--budget", "3", "--out", (dir / "c.jsonl").string() });
  REQUIRE(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["evaluations"] == 13);
  CHECK(read_run_log_file(dir / "c.jsonl").config["conditions"] == nlohmann::json({ "join" }));
}

TEST_CASE("optimize input errors") {
  const fs::path dir = scratch_dir("optimize_errors");
  const std::string missing = (dir / "no_such_pool.smi").string();
  const auto r = cli({ "optimize", "--pool", missing, "--seed", "1" });
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);

  const auto no_seed = cli({ "optimize", "--pool", kJoinPool });
  CHECK(no_seed.code == 2);
  CHECK(no_seed.err.find("seed") != std::string::npos);

  const auto bad_budget =
      cli({ "optimize", "--pool", kJoinPool, "--seed", "1", "--budget", "-3" });
  CHECK(bad_budget.code == 2);
  CHECK(bad_budget.err.find("budget") != std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"kernel": "rbf", "seed": 1})";
  const auto bad_cfg =
      cli({ "optimize", "--pool", kJoinPool, "--config", (dir / "bad.json").string() });
  CHECK(bad_cfg.code == 2);
  CHECK(bad_cfg.err.find("kernel") != std::string::npos);
}

TEST_CASE("explore and recipe") {
  const fs::path dir = scratch_dir("explore");
  const auto r = cli({ "explore", "--pool", kJoinPool, "--oracle", "join", "--explorer-steps",
                       "6", "--seed", "5", "--out", (dir / "dag.json").string() });
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["added"].size() == 6);
  CHECK(j["pool_size"] == 16);
  const std::string target = j["added"][5];

  const auto rec = cli({ "recipe", (dir / "dag.json").string(), target });
  REQUIRE(rec.code == 0);
  const auto rj = nlohmann::json::parse(rec.out);
  CHECK(rj["recipe"]["target"] == target);
  CHECK(rj["graph"].get<std::string>().find("edge ") != std::string::npos);

  const auto pool_member = cli({ "recipe", (dir / "dag.json").string(), "CCO" });
  REQUIRE(pool_member.code == 0);
  CHECK(nlohmann::json::parse(pool_member.out)["recipe"]["steps"].empty());

  CHECK(cli({ "recipe", (dir / "dag.json").string(), "CCCCCCCCCCCCCCCCCCCCCCCCCCCCCCCC" }).code
        == 3);
  CHECK(cli({ "recipe", (dir / "missing.json").string(), "C" }).code == 2);

  // A run log works as well.
  REQUIRE(cli({ "optimize", "--pool", kJoinPool, "--oracle", "join", "--budget", "3", "--seed",
                "2", "--out", (dir / "run.jsonl").string() })
              .code
          == 0);
  const RunLog log = read_run_log_file(dir / "run.jsonl");
  const auto from_log =
      cli({ "recipe", (dir / "run.jsonl").string(), log.records.back().molecule });
  CHECK(from_log.code == 0);
}

TEST_CASE("analyze emits one row per sampled pair") {
  const fs::path dir = scratch_dir("analyze");
  const auto all = cli({ "analyze", "--pool", kJoinPool, "--pairs", "1000" });
  REQUIRE(all.code == 0);
  auto lines = csv_lines(all.out);
  CHECK(lines[0]
        == "distance_unit_raw,distance_unit_norm,distance_mass_raw,distance_mass_norm,"
           "abs_objective_diff");
  CHECK(lines.size() == 1 + 45);

  const auto some = cli({ "analyze", "--pool", kJoinPool, "--pairs", "7", "--seed", "3" });
  REQUIRE(some.code == 0);
  CHECK(csv_lines(some.out).size() == 1 + 7);
  CHECK(some.out == cli({ "analyze", "--pool", kJoinPool, "--pairs", "7", "--seed", "3" }).out);

  // Identical molecules written differently: every column is zero.
  std::ofstream(dir / "same.smi") << "OCC\nCCO\nC(O)C\n";
  const auto same = cli({ "analyze", "--pool", (dir / "same.smi").string(), "--pairs", "5",
                          "--objective", "logp" });
  REQUIRE(same.code == 0);
  lines = csv_lines(same.out);
  CHECK(lines.size() == 1 + 3);
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(lines[i] == "0,0,0,0,0");

  CHECK(cli({ "analyze", "--pool", kJoinPool, "--pairs", "0" }).code == 2);
}
