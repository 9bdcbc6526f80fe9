#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "blockflow/engine/engine.hpp"
#include "blockflow/engine/plan.hpp"
#include "blockflow/graph/load.hpp"
#include "blockflow/graph/validate.hpp"
#include "blockflow/plugin/registry.hpp"
#include "run_cli.hpp"

using namespace blockflow;
using namespace blockflow::engine;

namespace {

plugin::PluginRegistry& registry() {
  static plugin::PluginRegistry r;
  static bool once = [] {
    r.addSearchPath(BLOCKFLOW_STDBLOCKS_DIR);
    r.addSearchPath(BLOCKFLOW_TESTBLOCKS_DIR);
    return true;
  }();
  (void)once;
  return r;
}

/// Parses, validates, and converts a graph to an ExecutionPlan, failing the
/// test loudly on any diagnostic.
ExecutionPlan planFromJson(const std::string& text) {
  Diagnostics diags;
  auto model = graph::parseGraph(text, "inline.json", diags);
  REQUIRE_MESSAGE(model.has_value(), diags.format());
  auto result = graph::validate(*model, registry(), diags);
  REQUIRE_MESSAGE(result.complete(), diags.format());
  return makePlan(*model, *result.schedule, result.wires);
}

const std::string kAccumulator = R"({
  "step_size": 0.01,
  "blocks": [
    {"name": "one", "library": "stdblocks", "label": "Constant",
     "parameters": {"value": 1.0}},
    {"name": "add", "library": "stdblocks", "label": "Sum",
     "parameters": {"signs": "++"}},
    {"name": "mem", "library": "stdblocks", "label": "UnitDelay"}
  ],
  "connections": [
    {"from": "one.0", "to": "add.0"},
    {"from": "mem.0", "to": "add.1"},
    {"from": "add.0", "to": "mem.0"}
  ]
})";

std::vector<std::string> readLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("a delay loop accumulates one per step") {
  auto plan = planFromJson(kAccumulator);
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), RunConfig{}, diags);
  REQUIRE_MESSAGE(engine != nullptr, diags.format());
  for (double want : {1.0, 2.0, 3.0, 4.0}) {
    REQUIRE(engine->step().ok());
    CHECK(engine->outputSignal("add", 0).f64()[0] == want);
  }
  CHECK(engine->currentStep() == 4);
  CHECK(engine->simTime() == doctest::Approx(0.04));
}

TEST_CASE("a unit delay shifts a sequence by exactly one step") {
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [
      {"name": "idx", "library": "testblocks", "label": "NanEmitter"},
      {"name": "lag", "library": "stdblocks", "label": "UnitDelay",
       "parameters": {"x0": -1.0}}
    ],
    "connections": [{"from": "idx.0", "to": "lag.0"}]
  })");
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), RunConfig{}, diags);
  REQUIRE(engine != nullptr);
  // NanEmitter emits the step index; lag must trail it by one step.
  std::vector<double> got;
  for (int i = 0; i < 4; ++i) {
    REQUIRE(engine->step().ok());
    got.push_back(engine->outputSignal("lag", 0).f64()[0]);
  }
  CHECK(got == std::vector<double>{-1.0, 0.0, 1.0, 2.0});
}

TEST_CASE("mutually fed delays are schedulable and swap their states") {
  // The delay ring itself has no width anchor; the Constant-fed Sum tap
  // pins the component to width 1 through the per-block unification rule.
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [
      {"name": "ping", "library": "stdblocks", "label": "UnitDelay",
       "parameters": {"x0": 1.0}},
      {"name": "pong", "library": "stdblocks", "label": "UnitDelay",
       "parameters": {"x0": 2.0}},
      {"name": "anchor", "library": "stdblocks", "label": "Constant",
       "parameters": {"value": 0.0}},
      {"name": "tap", "library": "stdblocks", "label": "Sum",
       "parameters": {"signs": "++"}}
    ],
    "connections": [
      {"from": "ping.0", "to": "pong.0"},
      {"from": "pong.0", "to": "ping.0"},
      {"from": "anchor.0", "to": "tap.0"},
      {"from": "ping.0", "to": "tap.1"}
    ]
  })");
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), RunConfig{}, diags);
  REQUIRE(engine != nullptr);
  REQUIRE(engine->step().ok());
  CHECK(engine->outputSignal("ping", 0).f64()[0] == 1.0);
  CHECK(engine->outputSignal("pong", 0).f64()[0] == 2.0);
  REQUIRE(engine->step().ok());
  CHECK(engine->outputSignal("ping", 0).f64()[0] == 2.0);
  CHECK(engine->outputSignal("pong", 0).f64()[0] == 1.0);
  REQUIRE(engine->step().ok());
  CHECK(engine->outputSignal("ping", 0).f64()[0] == 1.0);
  CHECK(engine->outputSignal("pong", 0).f64()[0] == 2.0);
}

TEST_CASE("makePlan reorders blocks into schedule order") {
  Diagnostics diags;
  auto model = graph::parseGraph(kAccumulator, "inline.json", diags);
  REQUIRE(model.has_value());
  auto result = graph::validate(*model, registry(), diags);
  REQUIRE(result.complete());
  auto plan = makePlan(*model, *result.schedule, result.wires);
  REQUIRE(plan.blocks.size() == 3);
  // Schedule: mem and one are source-like (mem's input is delayed), then add.
  CHECK(plan.blocks[0].instanceName == "mem");
  CHECK(plan.blocks[1].instanceName == "one");
  CHECK(plan.blocks[2].instanceName == "add");
  CHECK(plan.stepSize == 0.01);
  for (const auto& wire : plan.wires) {
    CHECK(wire.fromBlock >= 0);
    CHECK(wire.fromBlock < 3);
    CHECK(wire.toBlock >= 0);
    CHECK(wire.toBlock < 3);
  }
}

TEST_CASE("overrides replace parameters before initialization") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.overrides.push_back({"one", "value", 5.0});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  REQUIRE(engine->step().ok());
  CHECK(engine->outputSignal("add", 0).f64()[0] == 5.0);
}

TEST_CASE("overrides may introduce a parameter the model omits") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = 1;
  config.overrides.push_back({"mem", "x0", 40.0});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  REQUIRE(engine->step().ok());
  CHECK(engine->outputSignal("mem", 0).f64()[0] == 40.0);
}

TEST_CASE("an override for an unknown block fails the build") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.overrides.push_back({"ghost", "value", 1.0});
  Diagnostics diags;
  CHECK(Engine::build(plan, registry(), config, diags) == nullptr);
  REQUIRE(diags.hasCode("engine.bad_override"));
  CHECK(diags.items()[0].message.find("ghost") != std::string::npos);
}

TEST_CASE("the report echoes applied overrides as text") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = 1;
  config.overrides.push_back({"one", "value", 2.5});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  REQUIRE(report.overridesApplied.size() == 1);
  CHECK(report.overridesApplied[0] == "one.value=2.5");
}

TEST_CASE("a zero-step run initializes and terminates but never outputs") {
  auto dir = testsupport::makeTempDir("journal");
  auto journal = dir / "calls.txt";
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [{"name": "probe", "library": "testblocks",
                "label": "Instrumented",
                "parameters": {"journal": ")" +
                           journal.string() + R"("}}]
  })");
  RunConfig config;
  config.steps = 0;
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE_MESSAGE(engine != nullptr, diags.format());
  RunReport report = engine->run();
  CHECK(report.executedSteps == 0);
  CHECK(engine->runDiagnostics().ok());
  auto lines = readLines(journal);
  // declarePorts runs twice: once during validation, once in the engine.
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "declarePorts");
  CHECK(lines[1] == "declarePorts");
  CHECK(lines[2] == "initialize");
  CHECK(lines[3] == "terminate");
  std::filesystem::remove_all(dir);
}

TEST_CASE("every step calls output exactly once per block") {
  auto dir = testsupport::makeTempDir("journal");
  auto journal = dir / "calls.txt";
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [{"name": "probe", "library": "testblocks",
                "label": "Instrumented",
                "parameters": {"journal": ")" +
                           journal.string() + R"("}}]
  })");
  RunConfig config;
  config.steps = 3;
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  CHECK(report.executedSteps == 3);
  auto lines = readLines(journal);
  long outputs = 0;
  for (const auto& line : lines) {
    if (line == "output") ++outputs;
  }
  CHECK(outputs == 3);
  CHECK(lines.back() == "terminate");
  std::filesystem::remove_all(dir);
}

TEST_CASE("a non-finite output stops the run at the offending step") {
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [{"name": "bomb", "library": "testblocks",
                "label": "NanEmitter", "parameters": {"nan_step": 2}}]
  })");
  RunConfig config;
  config.steps = 10;
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  CHECK(report.executedSteps == 2);
  REQUIRE(engine->runDiagnostics().hasCode("engine.step_failed"));
  const std::string& msg = engine->runDiagnostics().items()[0].message;
  CHECK(msg.find("non-finite") != std::string::npos);
  CHECK(msg.find("step 2") != std::string::npos);
  CHECK(msg.find("bomb") != std::string::npos);
}

TEST_CASE("an initialize failure terminates the blocks before it") {
  auto dir = testsupport::makeTempDir("cleanup");
  auto journal = dir / "calls.txt";
  // 'early' initializes first (alphabetical schedule), 'fail' then throws;
  // the engine must give 'early' its terminate call.
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [
      {"name": "early", "library": "testblocks", "label": "Instrumented",
       "parameters": {"journal": ")" +
                           journal.string() + R"("}},
      {"name": "fail", "library": "testblocks", "label": "Thrower",
       "parameters": {"stage": "initialize"}}
    ]
  })");
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), RunConfig{}, diags);
  CHECK(engine == nullptr);
  REQUIRE(diags.hasCode("engine.initialize_failed"));
  bool foundMessage = false;
  for (const auto& item : diags.items()) {
    if (item.message.find("intentional failure in initialize") !=
        std::string::npos) {
      foundMessage = true;
      CHECK(item.instance == "fail");
    }
  }
  CHECK(foundMessage);
  auto lines = readLines(journal);
  REQUIRE(!lines.empty());
  CHECK(lines.back() == "terminate");
  std::filesystem::remove_all(dir);
}

TEST_CASE("log targets must name an existing float64 output") {
  auto plan = planFromJson(kAccumulator);
  auto dir = testsupport::makeTempDir("logs");

  RunConfig bad;
  bad.steps = 1;
  bad.logTargets.push_back({"ghost", 0, dir / "a.csv"});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), bad, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  CHECK(report.executedSteps == 0);
  CHECK(engine->runDiagnostics().hasCode("engine.bad_log_target"));

  RunConfig badPort;
  badPort.steps = 1;
  badPort.logTargets.push_back({"add", 7, dir / "b.csv"});
  Diagnostics diags2;
  auto engine2 = Engine::build(plan, registry(), badPort, diags2);
  REQUIRE(engine2 != nullptr);
  engine2->run();
  REQUIRE(engine2->runDiagnostics().hasCode("engine.bad_log_target"));
  CHECK(engine2->runDiagnostics().items()[0].message.find("out of range") !=
        std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("an unwritable log path is an io error") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = 1;
  config.logTargets.push_back({"add", 0, "/no-such-dir/log.csv"});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  engine->run();
  CHECK(engine->runDiagnostics().hasCode("io.write_failed"));
  CHECK(engine->runDiagnostics().hasCategory(DiagCategory::Io));
}

TEST_CASE("logged CSV carries one row per executed step") {
  auto plan = planFromJson(kAccumulator);
  auto dir = testsupport::makeTempDir("logs");
  auto path = dir / "add.csv";
  RunConfig config;
  config.steps = 1000;
  config.logTargets.push_back({"add", 0, path});
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  CHECK(report.executedSteps == 1000);
  auto lines = readLines(path);
  REQUIRE(lines.size() == 1001);  // header + one row per step
  CHECK(lines[0] == "time,v0");
  CHECK(lines[1] == "0,1");
  CHECK(lines[2] == "0.01,2");
  std::filesystem::remove_all(dir);
}

TEST_CASE("two identical runs produce byte-identical logs") {
  auto dir = testsupport::makeTempDir("logs");
  auto runOnce = [&](const std::filesystem::path& path) {
    auto plan = planFromJson(kAccumulator);
    RunConfig config;
    config.steps = 200;
    config.logTargets.push_back({"add", 0, path});
    Diagnostics diags;
    auto engine = Engine::build(plan, registry(), config, diags);
    REQUIRE(engine != nullptr);
    engine->run();
  };
  runOnce(dir / "a.csv");
  runOnce(dir / "b.csv");
  std::ifstream a(dir / "a.csv", std::ios::binary);
  std::ifstream b(dir / "b.csv", std::ios::binary);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("realtime pacing rejects sub-millisecond steps") {
  auto plan = planFromJson(kAccumulator);  // 0.01 is fine
  plan.stepSize = 0.0005;
  RunConfig config;
  config.pacing = Pacing::RealTime;
  Diagnostics diags;
  CHECK(Engine::build(plan, registry(), config, diags) == nullptr);
  REQUIRE(diags.hasCode("engine.bad_config"));
  CHECK(diags.items()[0].message.find("1 ms") != std::string::npos);
}

TEST_CASE("a negative step count is rejected") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = -5;
  Diagnostics diags;
  CHECK(Engine::build(plan, registry(), config, diags) == nullptr);
  CHECK(diags.hasCode("engine.bad_config"));
}

TEST_CASE("requestStop ends an unbounded run") {
  auto plan = planFromJson(R"({
    "step_size": 0.01,
    "blocks": [{"name": "slow", "library": "testblocks",
                "label": "SlowBlock", "parameters": {"sleep_ms": 1}},
               {"name": "src", "library": "stdblocks", "label": "Constant",
                "parameters": {"value": 1.0}}],
    "connections": [{"from": "src.0", "to": "slow.0"}]
  })");
  RunConfig config;
  config.steps = std::nullopt;  // run until stopped
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  std::thread stopper([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    engine->requestStop();
  });
  RunReport report = engine->run();
  stopper.join();
  CHECK(report.executedSteps > 0);
  CHECK(engine->runDiagnostics().ok());
}

TEST_CASE("outputSignal rejects unknown names and ports") {
  auto plan = planFromJson(kAccumulator);
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), RunConfig{}, diags);
  REQUIRE(engine != nullptr);
  CHECK_THROWS_AS((void)engine->outputSignal("ghost", 0), std::out_of_range);
  CHECK_THROWS_AS((void)engine->outputSignal("add", 3), std::out_of_range);
}

TEST_CASE("stepping a terminated engine fails cleanly") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = 1;
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  engine->run();
  Status status = engine->step();
  CHECK_FALSE(status.ok());
  CHECK(status.message == "engine is already terminated");
}

TEST_CASE("the run report serializes with all contract keys") {
  auto plan = planFromJson(kAccumulator);
  RunConfig config;
  config.steps = 5;
  Diagnostics diags;
  auto engine = Engine::build(plan, registry(), config, diags);
  REQUIRE(engine != nullptr);
  RunReport report = engine->run();
  auto doc = nlohmann::json::parse(runReportToJson(report));
  CHECK(doc["executed_steps"] == 5);
  CHECK(doc["wall_time_seconds"].is_number());
  CHECK(doc["overruns"] == 0);
  CHECK(doc["mean_start_error_seconds"].is_number());
  CHECK(doc["per_block_seconds"].is_object());
  CHECK(doc["per_block_seconds"].contains("add"));
  CHECK(doc["overrides"].is_array());
  REQUIRE(doc["plugins"].is_array());
  REQUIRE(doc["plugins"].size() == 1);
  CHECK(doc["plugins"][0]["name"] == "stdblocks");
  CHECK(doc["plugins"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("parseLogTarget understands block.port=path") {
  LogTarget target;
  std::string error;
  REQUIRE(parseLogTarget("plant.1=/tmp/x.csv", target, error));
  CHECK(target.block == "plant");
  CHECK(target.port == 1);
  CHECK(target.path == "/tmp/x.csv");
  CHECK_FALSE(parseLogTarget("plant=/tmp/x.csv", target, error));
  CHECK(error.find("block.port=path") != std::string::npos);
  CHECK_FALSE(parseLogTarget("plant.0", target, error));
  CHECK_FALSE(parseLogTarget("plant.0=", target, error));
}

TEST_CASE("parseOverride reads JSON values and falls back to strings") {
  ParameterOverride over;
  std::string error;

  REQUIRE(parseOverride("g.k=2.5", over, error));
  CHECK(over.block == "g");
  CHECK(over.name == "k");
  CHECK(std::get<double>(over.value) == 2.5);

  REQUIRE(parseOverride("g.k=3", over, error));
  CHECK(std::get<std::int64_t>(over.value) == 3);

  REQUIRE(parseOverride("f.b=[1, 2]", over, error));
  CHECK(std::get<std::vector<double>>(over.value) ==
        std::vector<double>{1.0, 2.0});

  REQUIRE(parseOverride("x.on=true", over, error));
  CHECK(std::get<bool>(over.value));

  REQUIRE(parseOverride("sink.path=out.csv", over, error));
  CHECK(std::get<std::string>(over.value) == "out.csv");

  CHECK_FALSE(parseOverride("nodot=1", over, error));
  CHECK_FALSE(parseOverride("a.b", over, error));
  CHECK(error.find("block.param=value") != std::string::npos);
}
