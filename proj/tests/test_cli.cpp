#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "densefactor/densefactor.hpp"

using namespace densefactor;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string scenario_path(const std::string& name) {
  return std::string(DENSEFACTOR_SCENARIO_DIR) + "/" + name;
}

struct Exec {
  int exit_code;
  std::string output;
};

Exec run_binary(const std::string& args) {
  std::string cmd = std::string(DENSEFACTOR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe))
    output.append(buffer, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("scenario parsing resolves the cyclic worked example") {
  Scenario scn = parse_scenario(slurp(scenario_path("z8.scn")));
  CHECK(scn.group->describe() == "cyclic 8");
  REQUIRE(scn.filtration.has_value());
  REQUIRE(scn.filtration->chain.size() == 4);
  CHECK(*scn.filtration->chain[1].size() == 2);
  CHECK(*scn.filtration->chain[2].size() == 4);
  CHECK(*scn.filtration->chain[3].size() == 8);
  CHECK(scn.filtration->complete);
  REQUIRE(scn.element.has_value());
  CHECK(*scn.element == Element{{7}});
}

TEST_CASE("scenario digests ignore comments but track content") {
  std::string text = slurp(scenario_path("z8.scn"));
  Scenario original = parse_scenario(text);
  Scenario commented = parse_scenario("# extra comment\n" + text + "\n# end\n");
  CHECK(original.digest == commented.digest);

  std::string changed = text;
  auto pos = changed.find("element 7");
  REQUIRE(pos != std::string::npos);
  changed.replace(pos, 9, "element 5");
  CHECK(parse_scenario(changed).digest != original.digest);
}

TEST_CASE("scenario validation errors carry line numbers") {
  CHECK_THROWS_AS(parse_scenario(""), ParseError);
  CHECK_THROWS_AS(parse_scenario("group cyclic 8\ngroup cyclic 9\n"),
                  ParseError);
  // Chain element outside the group.
  CHECK_THROWS_AS(
      parse_scenario("group cyclic 8\nfiltration generators 9\n"),
      ParseError);
  // Canonical field order violations.
  CHECK_THROWS_AS(parse_scenario("group cyclic 8\nparam steps 3\nelement 1\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_scenario("group cyclic 8\nparam steps 3\nparam probes 2\n"),
      ParseError);
  // Base set of the wrong kind for the group.
  CHECK_THROWS_AS(parse_scenario("group cyclic 8\ntopology cylinder 0:1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario("group cyclic 8\nparam zzz 1\n"), ParseError);
}

TEST_CASE("factorize-filtration report for the golden chain") {
  Scenario scn = parse_scenario(slurp(scenario_path("z8.scn")));
  CommandResult result = run_command("factorize-filtration", scn);
  CHECK(result.exit_code == kExitPass);
  CHECK(result.report.find("A: 0 1 4 5") != std::string::npos);
  CHECK(result.report.find("B: 0 2") != std::string::npos);
  CHECK(result.report.find("partial-factorization=pass") != std::string::npos);
  CHECK(result.report.find("factorization=pass") != std::string::npos);
  CHECK(result.report.find("status=pass") != std::string::npos);

  // Byte-identical reruns.
  CommandResult again = run_command("factorize-filtration", scn);
  CHECK(result.report == again.report);
}

TEST_CASE("decompose report prints the normal form") {
  Scenario scn = parse_scenario(slurp(scenario_path("z8.scn")));
  CommandResult result = run_command("decompose", scn);
  CHECK(result.exit_code == kExitPass);
  CHECK(result.report.find("7 = x(1@2)*x(4@0)*y(2@1)") != std::string::npos);

  Scenario lazy = parse_scenario(slurp(scenario_path("z_lazy.scn")));
  CommandResult lazy_result = run_command("decompose", lazy);
  CHECK(lazy_result.exit_code == kExitPass);
  CHECK(lazy_result.report.find("(7) = x((1)@2)*x((4)@0)*y((2)@1)") !=
        std::string::npos);
}

TEST_CASE("greedy commands map search exhaustion to exit code 3") {
  Scenario negative =
      parse_scenario(slurp(scenario_path("boolean_c4_negative.scn")));
  CommandResult result = run_command("greedy-c4", negative);
  CHECK(result.exit_code == kExitExhausted);
  CHECK(result.report.find("status=search-exhausted") != std::string::npos);
  CHECK(result.report.find("extend_A_symmetric") != std::string::npos);
  CHECK(result.report.find("squares.U0=1") != std::string::npos);
}

TEST_CASE("usage problems map to exit code 2") {
  Scenario scn = parse_scenario("group cyclic 8\n");
  CommandResult missing = run_command("decompose", scn);
  CHECK(missing.exit_code == kExitUsage);
  CHECK(missing.report.find("status=usage-error") != std::string::npos);
  CommandResult unknown = run_command("no-such-command", scn);
  CHECK(unknown.exit_code == kExitUsage);
}

TEST_CASE("verify command audits a declared chain") {
  Scenario scn = parse_scenario(slurp(scenario_path("z8.scn")));
  CommandResult result = run_command("verify", scn);
  CHECK(result.exit_code == kExitPass);
  CHECK(result.report.find("filtration.valid=pass") != std::string::npos);
  CHECK(result.report.find("filtration-audit=pass") != std::string::npos);
}

TEST_CASE("comment-6 command reports dense factors") {
  Scenario scn = parse_scenario(slurp(scenario_path("boolean_c6.scn")));
  CommandResult result = run_command("greedy-c6", scn);
  CHECK(result.exit_code == kExitPass);
  CHECK(result.report.find("per-step-invariants=pass") != std::string::npos);
}

TEST_CASE("the installed binary round-trips scenario to report") {
  Exec ok = run_binary("factorize-filtration --scenario " +
                       scenario_path("z8.scn"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("A: 0 1 4 5") != std::string::npos);
  CHECK(ok.output.find("command=factorize-filtration") != std::string::npos);

  Exec exhausted = run_binary("greedy-c4 --scenario " +
                              scenario_path("boolean_c4_negative.scn"));
  CHECK(exhausted.exit_code == 3);

  Exec usage = run_binary("decompose --scenario /nonexistent.scn");
  CHECK(usage.exit_code == 2);

  Exec override_run = run_binary("greedy-c6 --scenario " +
                                 scenario_path("boolean_c6.scn") +
                                 " --steps 3");
  CHECK(override_run.exit_code == 0);
  CHECK(override_run.output.find("steps.requested=3") != std::string::npos);
}
