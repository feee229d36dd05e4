//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/run_log.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "molbo/error.h"

namespace molbo {
namespace {
std::optional<AcquisitionKind> parse_acquisition(const nlohmann::json &j) {
  if (j.is_null())
    return std::nullopt;
  const auto name = j.get<std::string>();
  for (AcquisitionKind k: kAcquisitionKinds) {
    if (acquisition_name(k) == name)
      return k;
  }
  throw Error(ErrorCode::kIoError, "run log: unknown acquisition '" + name + "'");
}
}  // namespace

nlohmann::json evaluation_to_json(const EvaluationRecord &r) {
  return { { "type", "evaluation" },
           { "iteration", r.iteration },
           { "molecule", r.molecule },
           { "value", r.value },
           { "acquisition", r.acquisition
                                ? nlohmann::json(std::string(acquisition_name(*r.acquisition)))
                                : nlohmann::json(nullptr) },
           { "pool_size_after", r.pool_size_after },
           { "wall_ms", r.wall_ms } };
}

nlohmann::json summary_to_json(const RunResult &r) {
  return { { "best_value", r.best_value },
           { "best_molecule", r.best_molecule },
           { "evaluations", r.evaluations() },
           { "stalled", r.stalled } };
}

JsonlRunLog::JsonlRunLog(std::ostream &os, const RunConfig &cfg): os_(os) {
  emit({ { "type", "header" }, { "config", cfg.to_json() } });
}

void JsonlRunLog::on_node(const SynthesisNode &node) {
  nlohmann::json j = node_to_json(node);
  j["type"] = "node";
  emit(j);
}

void JsonlRunLog::on_initial(const InitialEvaluation &e) {
  emit({ { "type", "initial" }, { "molecule", e.molecule }, { "value", e.value } });
}

void JsonlRunLog::on_evaluation(const EvaluationRecord &r) { emit(evaluation_to_json(r)); }

void JsonlRunLog::write_summary(const RunResult &r) {
  nlohmann::json j = summary_to_json(r);
  j["type"] = "summary";
  emit(j);
}

void JsonlRunLog::emit(const nlohmann::json &line) {
  os_ << line.dump() << '\n';
  os_.flush();
  if (!os_)
    throw Error(ErrorCode::kIoError, "run log: write failed");
}

std::vector<double> RunLog::best_so_far() const {
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

RunLog read_run_log(std::istream &is) {
  RunLog log;
  nlohmann::json nodes = nlohmann::json::array();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty())
      continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        log.config = j.at("config");
      } else if (type == "node") {
        j.erase("type");
        nodes.push_back(std::move(j));
      } else if (type == "initial") {
        log.initial.push_back(
            { j.at("molecule").get<std::string>(), j.at("value").get<double>() });
      } else if (type == "evaluation") {
        log.records.push_back({ j.at("iteration").get<int>(),
                                j.at("molecule").get<std::string>(),
                                j.at("value").get<double>(),
                                parse_acquisition(j.at("acquisition")),
                                j.at("pool_size_after").get<int>(),
                                j.at("wall_ms").get<std::int64_t>() });
      } else if (type == "summary") {
        j.erase("type");
        log.summary = std::move(j);
      } else {
        throw Error(ErrorCode::kIoError, "unknown line type '" + type + "'");
      }
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kIoError,
                  "run log line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error &e) {
      throw Error(e.code(), "run log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  log.dag = SynthesisDag::from_json({ { "nodes", nodes } });
  return log;
}

RunLog read_run_log_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::kIoError, "cannot open run log " + path.string());
  return read_run_log(is);
}

SynthesisDag load_dag_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  // A whole-file JSON object with "nodes" is a serialized graph; anything
  // else is read as a run log.
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (!doc.is_discarded() && doc.is_object() && doc.contains("nodes"))
    return SynthesisDag::from_json(doc);
  std::istringstream lines(text);
  return read_run_log(lines).dag;
}

}  // namespace molbo
