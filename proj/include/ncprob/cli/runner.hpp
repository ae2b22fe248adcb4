#pragma once

// Scenario execution: validate everything, run tasks in order, assemble the
// report. Wall-clock figures live in a separate "timing" member so the rest
// of the report is reproducible byte for byte.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ncprob/cli/tasks.hpp"
#include "ncprob/version.hpp"

namespace ncprob::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitTaskFailed = 3;

inline const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ScenarioError*>(&e)) return "ScenarioError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const ArgumentError*>(&e)) return "ArgumentError";
  if (dynamic_cast<const DimensionError*>(&e)) return "DimensionError";
  if (dynamic_cast<const InvariantError*>(&e)) return "InvariantError";
  if (dynamic_cast<const NullConditioningError*>(&e)) return "NullConditioningError";
  if (dynamic_cast<const NonCommutingError*>(&e)) return "NonCommutingError";
  if (dynamic_cast<const AlgebraError*>(&e)) return "AlgebraError";
  if (dynamic_cast<const HypothesisError*>(&e)) return "HypothesisError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

struct RunOutcome {
  int exit_code = kExitOk;
  std::optional<Json> report;  // absent when validation failed
  std::string message;         // validation message, if any
};

// Runs a parsed scenario document.
inline RunOutcome run_document(Json doc, std::optional<std::uint64_t> seed = std::nullopt) {
  using Clock = std::chrono::steady_clock;
  RunOutcome outcome;
  Scenario s;
  std::vector<TaskRun> runs;
  try {
    s = parse_scenario(std::move(doc), seed);
    for (const auto& entry : s.tasks) {
      const Node node = s.task_node(entry.index);
      const TaskInfo* info = find_task(entry.task);
      if (info == nullptr) node.at("task").fail("unknown task '" + entry.task + "'");
      runs.push_back(info->prepare(s, node));
    }
  } catch (const ScenarioError& e) {
    outcome.exit_code = kExitInvalid;
    outcome.message = e.what();
    return outcome;
  }

  const auto& o = s.optimizer;
  Json report{{"tool", "ncprob"},
              {"version", kVersion},
              {"scenario", s.name},
              {"seed", s.seed},
              {"optimizer",
               {{"restarts", o.restarts},
                {"max_iters", o.max_iterations},
                {"tol", o.tolerance},
                {"seed", o.seed},
                {"parallel", o.parallel}}},
              {"status", "ok"},
              {"results", Json::array()}};
  Json timing{{"unit", "seconds"}, {"tasks", Json::array()}};
  const auto start = Clock::now();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& entry = s.tasks[i];
    Json result{{"id", entry.id}, {"task", entry.task}};
    const auto t0 = Clock::now();
    try {
      Json output = runs[i]();
      result["status"] = "ok";
      result["output"] = std::move(output);
    } catch (const std::exception& e) {
      result["status"] = "error";
      result["error"] = Json{{"type", error_type(e)}, {"message", e.what()}};
      report["status"] = "error";
      outcome.exit_code = kExitTaskFailed;
    }
    const std::chrono::duration<double> dt = Clock::now() - t0;
    timing["tasks"].push_back(Json{{"id", entry.id}, {"seconds", dt.count()}});
    report["results"].push_back(std::move(result));
  }
  const std::chrono::duration<double> total = Clock::now() - start;
  timing["total_seconds"] = total.count();
  report["timing"] = std::move(timing);
  outcome.report = std::move(report);
  return outcome;
}

// The report without its wall-clock section.
inline Json deterministic_part(Json report) {
  report.erase("timing");
  return report;
}

// Reads `path`, runs it and writes the report to `out_path` (stdout when
// empty). Returns the process exit code.
inline int run_scenario(const std::string& path, const std::string& out_path,
                        std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  try {
    outcome = run_document(read_json_file(path), seed);
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (!outcome.report) {
    err << "error: " << path << ": " << outcome.message << "\n";
    return outcome.exit_code;
  }
  const std::string text = dump(*outcome.report) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write report to '" << out_path << "'\n";
      return kExitTaskFailed;
    }
  }
  if (outcome.exit_code == kExitTaskFailed) {
    for (const auto& r : (*outcome.report)["results"]) {
      if (r["status"] == "error")
        err << "task '" << r["id"].get<std::string>() << "' failed: " << r["error"]["message"].get<std::string>()
            << "\n";
    }
  }
  return outcome.exit_code;
}

}  // namespace ncprob::cli
