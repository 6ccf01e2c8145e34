#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "densefactor/densefactor.hpp"

int main(int argc, char** argv) {
  CLI::App app{"group factorizations via filtrations and greedy extension"};
  app.require_subcommand(1);

  std::string scenario_path;
  densefactor::Overrides overrides;
  std::uint64_t steps = 0, stages = 0, probes = 0, up_to = 0;

  for (const auto& name : densefactor::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario_path, "scenario file")->required();
    sub->add_option("--steps", steps, "greedy step count");
    sub->add_option("--stages", stages, "dense filtration stage count");
    sub->add_option("--probes", probes, "candidate probe budget");
    sub->add_option("--up-to", up_to, "density prefix length");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--steps")) overrides.steps = steps;
  if (sub->count("--stages")) overrides.stages = stages;
  if (sub->count("--probes")) overrides.probes = probes;
  if (sub->count("--up-to")) overrides.up_to = up_to;

  std::ifstream in(scenario_path);
  if (!in) {
    std::cerr << "error=ScenarioUnreadable\ncannot open " << scenario_path
              << "\n";
    return densefactor::kExitUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();

  try {
    densefactor::Scenario scn = densefactor::parse_scenario(text.str());
    densefactor::CommandResult result =
        densefactor::run_command(sub->get_name(), scn, overrides);
    std::cout << result.report;
    return result.exit_code;
  } catch (const densefactor::Error& e) {
    std::cout << "error=" << e.code() << "\n" << e.what() << "\n"
              << "status=usage-error\n";
    return densefactor::kExitUsage;
  }
}
