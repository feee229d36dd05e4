//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_RUN_LOG_H_
#define MOLBO_RUN_LOG_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "molbo/optimizer.h"

namespace molbo {

// JSONL run log. Every line is an object with a "type" field:
//   header      {"config": RunConfig}
//   node        synthesis graph node, emitted when it is created
//   initial     {"molecule", "value"}
//   evaluation  {"iteration", "molecule", "value", "acquisition", "pool_size_after", "wall_ms"}
//   summary     {"best_value", "best_molecule", "evaluations", "stalled"}
// Lines are flushed as they are written.

nlohmann::json evaluation_to_json(const EvaluationRecord &r);
nlohmann::json summary_to_json(const RunResult &r);

class JsonlRunLog: public RunObserver {
public:
  /// Writes the header line immediately.
  JsonlRunLog(std::ostream &os, const RunConfig &cfg);

  void on_node(const SynthesisNode &node) override;
  void on_initial(const InitialEvaluation &e) override;
  void on_evaluation(const EvaluationRecord &r) override;
  void write_summary(const RunResult &r);

private:
  void emit(const nlohmann::json &line);

  std::ostream &os_;
};

struct RunLog {
  nlohmann::json config;
  std::vector<InitialEvaluation> initial;
  std::vector<EvaluationRecord> records;
  SynthesisDag dag;
  std::optional<nlohmann::json> summary;

  /// Same convention as RunResult::best_so_far.
  std::vector<double> best_so_far() const;
};

/// Throws kIoError on malformed lines.
RunLog read_run_log(std::istream &is);
RunLog read_run_log_file(const std::filesystem::path &path);

/// Accepts either a JSONL run log or a SynthesisDag::to_json() document.
SynthesisDag load_dag_file(const std::filesystem::path &path);

}  // namespace molbo

#endif  // MOLBO_RUN_LOG_H_
