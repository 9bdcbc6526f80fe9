#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end coverage of the `blockflow` binary: every subcommand, the
// documented exit codes, and the --json diagnostic shape. Each case runs the
// real executable in a scratch directory.

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "run_cli.hpp"

namespace {

namespace fs = std::filesystem;

std::string quoted(const std::string& text) { return "'" + text + "'"; }

std::string cli() { return quoted(BLOCKFLOW_CLI); }

std::string stdblocksFlag() {
  return " --plugin-path " + quoted(BLOCKFLOW_STDBLOCKS_DIR);
}

std::string testblocksFlag() {
  return " --plugin-path " + quoted(BLOCKFLOW_TESTBLOCKS_DIR);
}

fs::path demoModel() {
  return fs::path(BLOCKFLOW_MODELS_DIR) / "pid_pendulum.json";
}

fs::path writeModel(const fs::path& dir, const std::string& name,
                    const std::string& text) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

constexpr const char* kHealthy = R"({
  "step_size": 0.01,
  "blocks": [
    {"name": "src", "library": "stdblocks", "label": "Constant",
     "parameters": {"value": 1.0}},
    {"name": "amp", "library": "stdblocks", "label": "Gain",
     "parameters": {"k": 2.0}}
  ],
  "connections": [{"from": "src.0", "to": "amp.0"}]
})";

// Sum and Gain feed each other through direct-feedthrough inputs; the
// Constant anchors the widths so validation reaches the scheduler.
constexpr const char* kLoop = R"({
  "step_size": 0.01,
  "blocks": [
    {"name": "c", "library": "stdblocks", "label": "Constant",
     "parameters": {"value": 0.0}},
    {"name": "s", "library": "stdblocks", "label": "Sum",
     "parameters": {"signs": "++"}},
    {"name": "g", "library": "stdblocks", "label": "Gain",
     "parameters": {"k": 1.0}}
  ],
  "connections": [
    {"from": "c.0", "to": "s.0"},
    {"from": "g.0", "to": "s.1"},
    {"from": "s.0", "to": "g.0"}
  ]
})";

constexpr const char* kGhostLibrary = R"({
  "step_size": 0.01,
  "blocks": [
    {"name": "x", "library": "ghostlib", "label": "Whatever",
     "parameters": {}}
  ]
})";

constexpr const char* kNanModel = R"({
  "step_size": 0.01,
  "blocks": [
    {"name": "bomb", "library": "testblocks", "label": "NanEmitter",
     "parameters": {"nan_step": 2}}
  ]
})";

std::size_t countLines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("validate accepts a healthy model silently") {
  auto dir = testsupport::makeTempDir("cli_ok");
  auto model = writeModel(dir, "m.json", kHealthy);
  auto r = testsupport::runCommand(
      cli() + " validate " + quoted(model.string()) + stdblocksFlag(), dir);
  CHECK(r.exitCode == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());
}

TEST_CASE("validate reports an algebraic loop with exit 1") {
  auto dir = testsupport::makeTempDir("cli_loop");
  auto model = writeModel(dir, "m.json", kLoop);
  auto r = testsupport::runCommand(
      cli() + " validate " + quoted(model.string()) + stdblocksFlag(), dir);
  CHECK(r.exitCode == 1);
  CHECK(r.err.find("algebraic loop: g -> s -> g") != std::string::npos);
  CHECK(r.err.find("UnitDelay") != std::string::npos);
}

TEST_CASE("validate reports a missing plugin with exit 2 and probed paths") {
  auto dir = testsupport::makeTempDir("cli_ghost");
  auto model = writeModel(dir, "m.json", kGhostLibrary);
  auto r = testsupport::runCommand(
      cli() + " validate " + quoted(model.string()) + stdblocksFlag(), dir);
  CHECK(r.exitCode == 2);
  CHECK(r.err.find("'ghostlib' not found; probed:") != std::string::npos);
  CHECK(r.err.find(BLOCKFLOW_STDBLOCKS_DIR) != std::string::npos);
}

TEST_CASE("validate reports unreadable files with exit 3") {
  auto dir = testsupport::makeTempDir("cli_nofile");
  auto r = testsupport::runCommand(
      cli() + " validate " + quoted((dir / "absent.json").string()) +
          stdblocksFlag(),
      dir);
  CHECK(r.exitCode == 3);
  CHECK(r.err.find("absent.json") != std::string::npos);
}

TEST_CASE("--json turns diagnostics into a machine-readable array") {
  auto dir = testsupport::makeTempDir("cli_json");
  auto model = writeModel(dir, "m.json", kLoop);
  auto r = testsupport::runCommand(
      cli() + " --json validate " + quoted(model.string()) + stdblocksFlag(),
      dir);
  CHECK(r.exitCode == 1);
  auto parsed = nlohmann::json::parse(r.err, nullptr, false);
  REQUIRE(!parsed.is_discarded());
  REQUIRE(parsed.is_array());
  REQUIRE(!parsed.empty());
  CHECK(parsed[0]["severity"] == "error");
  CHECK(parsed[0]["category"] == "model");
  CHECK(parsed[0]["code"] == "graph.algebraic_loop");
  CHECK(parsed[0]["message"].get<std::string>().find("g -> s -> g") !=
        std::string::npos);
}

TEST_CASE("schedule prints the execution order as JSON") {
  auto dir = testsupport::makeTempDir("cli_sched");
  auto model = writeModel(dir, "m.json", kHealthy);
  auto r = testsupport::runCommand(
      cli() + " schedule " + quoted(model.string()) + stdblocksFlag(), dir);
  REQUIRE(r.exitCode == 0);
  auto parsed = nlohmann::json::parse(r.out, nullptr, false);
  REQUIRE(!parsed.is_discarded());
  REQUIRE(parsed.contains("order"));
  CHECK(parsed["order"] == nlohmann::json::array({"src", "amp"}));
}

TEST_CASE("run logs the demo plant and accounts for every row") {
  auto dir = testsupport::makeTempDir("cli_run");
  const auto csv = dir / "out.csv";
  auto r = testsupport::runCommand(
      cli() + " run " + quoted(demoModel().string()) +
          " --steps 1000 --log plant.0=" + quoted(csv.string()) +
          stdblocksFlag(),
      dir);
  REQUIRE(r.exitCode == 0);
  const std::string contents = testsupport::readAll(csv);
  CHECK(countLines(contents) == 1001);  // header + one row per step
  CHECK(contents.rfind("time,v0", 0) == 0);

  auto report = nlohmann::json::parse(r.out, nullptr, false);
  REQUIRE(!report.is_discarded());
  CHECK(report["executed_steps"] == 1000);
  CHECK(report["overruns"] == 0);
}

TEST_CASE("run echoes --set overrides in the report") {
  auto dir = testsupport::makeTempDir("cli_set");
  auto r = testsupport::runCommand(
      cli() + " run " + quoted(demoModel().string()) +
          " --steps 10 --set pid.Kp=12.5" + stdblocksFlag(),
      dir);
  REQUIRE(r.exitCode == 0);
  auto report = nlohmann::json::parse(r.out, nullptr, false);
  REQUIRE(!report.is_discarded());
  REQUIRE(report.contains("overrides"));
  CHECK(report["overrides"] == nlohmann::json::array({"pid.Kp=12.5"}));
}

TEST_CASE("run surfaces a failed step as exit 4") {
  auto dir = testsupport::makeTempDir("cli_nan");
  auto model = writeModel(dir, "m.json", kNanModel);
  auto r = testsupport::runCommand(
      cli() + " run " + quoted(model.string()) + " --steps 10" +
          testblocksFlag(),
      dir);
  CHECK(r.exitCode == 4);
  CHECK(r.err.find("non-finite") != std::string::npos);
  CHECK(r.err.find("step 2") != std::string::npos);
}

TEST_CASE("run rejects a malformed --set before touching the graph") {
  auto dir = testsupport::makeTempDir("cli_badset");
  auto r = testsupport::runCommand(
      cli() + " run " + quoted(demoModel().string()) +
          " --steps 1 --set nodot" + stdblocksFlag(),
      dir);
  CHECK(r.exitCode == 1);
  CHECK(r.err.find("--set:") != std::string::npos);
}

TEST_CASE("codegen writes a bundle and prints the manifest path") {
  auto dir = testsupport::makeTempDir("cli_gen");
  const auto out = dir / "bundle";
  auto r = testsupport::runCommand(
      cli() + " codegen " + quoted(demoModel().string()) + " --out " +
          quoted(out.string()) + stdblocksFlag(),
      dir);
  REQUIRE(r.exitCode == 0);
  CHECK(r.out == (out / "MANIFEST").string() + "\n");
  CHECK(fs::exists(out / "main.cpp"));
  CHECK(fs::exists(out / "schedule_table.cpp"));
  CHECK(fs::exists(out / "config.json"));
  CHECK(fs::exists(out / "build.sh"));
  CHECK(fs::exists(out / "MANIFEST"));
}

TEST_CASE("codegen maps an unwritable destination to exit 3") {
  auto dir = testsupport::makeTempDir("cli_genro");
  auto r = testsupport::runCommand(
      cli() + " codegen " + quoted(demoModel().string()) +
          " --out /proc/blockflow-denied" + stdblocksFlag(),
      dir);
  CHECK(r.exitCode == 3);
}

TEST_CASE("codegen rejects an unknown label with exit 2 and no bundle") {
  auto dir = testsupport::makeTempDir("cli_genbad");
  auto model = writeModel(dir, "m.json", R"({
    "step_size": 0.01,
    "blocks": [
      {"name": "x", "library": "stdblocks", "label": "Amplifier",
       "parameters": {}}
    ]
  })");
  const auto out = dir / "bundle";
  auto r = testsupport::runCommand(
      cli() + " codegen " + quoted(model.string()) + " --out " +
          quoted(out.string()) + stdblocksFlag(),
      dir);
  CHECK(r.exitCode == 2);
  CHECK(r.err.find("has no block labeled 'Amplifier'") != std::string::npos);
  CHECK(r.err.find("available:") != std::string::npos);
  CHECK(!fs::exists(out / "main.cpp"));
}

TEST_CASE("blocks lists the standard library") {
  auto dir = testsupport::makeTempDir("cli_blocks");
  auto r = testsupport::runCommand(
      cli() + " blocks --library stdblocks" + stdblocksFlag(), dir);
  REQUIRE(r.exitCode == 0);
  CHECK(r.out.find("library: stdblocks") != std::string::npos);
  CHECK(r.out.find("abi_version: 1") != std::string::npos);
  for (const char* label :
       {"Constant", "CsvSink", "DiscreteFilter", "Gain", "PID", "Pendulum",
        "Saturation", "SineSource", "StepSource", "Sum", "UnitDelay"}) {
    CAPTURE(label);
    CHECK(r.out.find(std::string("  ") + label + "\n") != std::string::npos);
  }
}

TEST_CASE("blocks reports an ABI mismatch with both versions") {
  auto dir = testsupport::makeTempDir("cli_abi");
  auto r = testsupport::runCommand(
      cli() + " blocks --library abimismatch" + testblocksFlag(), dir);
  CHECK(r.exitCode == 2);
  CHECK(r.err.find("plugin ABI 99") != std::string::npos);
  CHECK(r.err.find("host ABI 1") != std::string::npos);
}

TEST_CASE("blocks reports a missing library with probed paths") {
  auto dir = testsupport::makeTempDir("cli_noblocks");
  auto r = testsupport::runCommand(
      cli() + " blocks --library nosuchlib" + stdblocksFlag(), dir);
  CHECK(r.exitCode == 2);
  CHECK(r.err.find("'nosuchlib' not found; probed:") != std::string::npos);
}

TEST_CASE("help names every subcommand") {
  auto dir = testsupport::makeTempDir("cli_help");
  auto r = testsupport::runCommand(cli() + " --help", dir);
  CHECK(r.exitCode == 0);
  for (const char* sub : {"validate", "schedule", "run", "codegen", "blocks"}) {
    CAPTURE(sub);
    CHECK(r.out.find(sub) != std::string::npos);
  }
}

TEST_CASE("a missing subcommand is a usage error") {
  auto dir = testsupport::makeTempDir("cli_nosub");
  auto r = testsupport::runCommand(cli(), dir);
  CHECK(r.exitCode == 1);
  CHECK(!r.err.empty());
}
