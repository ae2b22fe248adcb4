// ncprob: run scenario files and list the available tasks.

#include <iostream>

#include <CLI11.hpp>

#include "ncprob/cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace ncprob::cli;

  CLI::App app{"Scenario runner for finite classical and quantum probability models"};
  app.set_version_flag("--version", std::string("ncprob ") + ncprob::kVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Validate and execute a scenario, writing a JSON report");
  std::string scenario_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out,-o", out_path, "Report path (stdout if omitted)");
  run->add_option("--seed", seed, "Override the scenario seed");

  app.add_subcommand("tasks", "List the available task names");

  auto* describe = app.add_subcommand("describe", "Show the argument schema of a task");
  std::string task_name;
  describe->add_option("task", task_name, "Task name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) return run_scenario(scenario_path, out_path, seed, std::cout, std::cerr);

  if (app.got_subcommand("tasks")) {
    for (const auto& t : task_catalogue()) std::cout << t.name << "\n";
    return kExitOk;
  }

  const TaskInfo* info = find_task(task_name);
  if (info == nullptr) {
    std::cerr << "error: unknown task '" << task_name << "' (see 'ncprob tasks')\n";
    return kExitUsage;
  }
  std::cout << describe_task(*info);
  return kExitOk;
}
