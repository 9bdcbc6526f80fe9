#include "blockflow/codegen/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blockflow/engine/engine.hpp"
#include "blockflow/graph/value_json.hpp"
#include "blockflow/plugin/registry.hpp"

namespace blockflow::codegen {
namespace {

using nlohmann::json;

bool readParameterObject(const json& object, std::string_view owner,
                         const std::filesystem::path& origin,
                         std::vector<Parameter>& out, Diagnostics& diags) {
  bool ok = true;
  for (const auto& [name, value] : object.items()) {
    Parameter param;
    param.name = name;
    if (!graph::valueFromJson(value, param.value)) {
      diags.error(DiagCategory::Model, "config.bad_value",
                  origin.string() + ": entry '" + name + "' of " +
                      std::string(owner) +
                      " has an unsupported value (allowed: number, bool, "
                      "string, numeric array)");
      ok = false;
      continue;
    }
    out.push_back(std::move(param));
  }
  std::sort(out.begin(), out.end(), [](const Parameter& a, const Parameter& b) {
    return a.name < b.name;
  });
  return ok;
}

std::atomic<engine::Engine*> gActiveEngine{nullptr};

void onInterrupt(int) {
  if (auto* engine = gActiveEngine.load()) engine->requestStop();
}

}  // namespace

std::optional<RuntimeConfig> loadRuntimeConfig(
    const std::filesystem::path& path, Diagnostics& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diags.error(DiagCategory::Io, "io.read_failed",
                "cannot read config file '" + path.string() + "'");
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  const json doc = json::parse(buffer.str(), nullptr,
                               /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    diags.error(DiagCategory::Model, "config.parse_error",
                path.string() + ": not a JSON object");
    return std::nullopt;
  }

  RuntimeConfig config;
  bool ok = true;
  if (doc.contains("configuration")) {
    if (!doc["configuration"].is_object()) {
      diags.error(DiagCategory::Model, "config.bad_configuration",
                  path.string() + ": 'configuration' must be an object");
      ok = false;
    } else {
      ok &= readParameterObject(doc["configuration"], "'configuration'", path,
                                config.configuration, diags);
    }
  }
  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_object()) {
      diags.error(DiagCategory::Model, "config.bad_parameters",
                  path.string() + ": 'parameters' must be an object");
      ok = false;
    } else {
      for (const auto& [block, params] : doc["parameters"].items()) {
        if (!params.is_object()) {
          diags.error(DiagCategory::Model, "config.bad_parameters",
                      path.string() + ": parameters of block '" + block +
                          "' must be an object");
          ok = false;
          continue;
        }
        ok &= readParameterObject(params, "block '" + block + "'", path,
                                  config.parameters[block], diags);
      }
    }
  }
  if (!ok) return std::nullopt;
  return config;
}

std::string runtimeConfigText(const engine::ExecutionPlan& plan) {
  json doc;
  doc["configuration"] = json::object();
  for (const Parameter& param : plan.configuration) {
    doc["configuration"][param.name] = graph::valueToJson(param.value);
  }
  doc["parameters"] = json::object();
  for (const graph::BlockDescriptor& block : plan.blocks) {
    json params = json::object();
    for (const Parameter& param : block.parameters) {
      params[param.name] = graph::valueToJson(param.value);
    }
    doc["parameters"][block.instanceName] = std::move(params);
  }
  return doc.dump(2) + "\n";
}

std::optional<engine::ExecutionPlan> planFromStatic(const StaticModel& model,
                                                    const RuntimeConfig& config,
                                                    Diagnostics& diags) {
  engine::ExecutionPlan plan;
  plan.stepSize = model.stepSize;
  plan.configuration = config.configuration;
  plan.blocks.reserve(model.blockCount);
  for (std::size_t i = 0; i < model.blockCount; ++i) {
    const StaticBlockRow& row = model.blocks[i];
    graph::BlockDescriptor block;
    block.instanceName = row.name;
    block.libraryName = row.library;
    block.classLabel = row.label;
    if (auto it = config.parameters.find(block.instanceName);
        it != config.parameters.end()) {
      block.parameters = it->second;
    }
    plan.blocks.push_back(std::move(block));
  }
  for (const auto& [name, params] : config.parameters) {
    (void)params;
    const bool known = std::any_of(
        plan.blocks.begin(), plan.blocks.end(),
        [&](const graph::BlockDescriptor& b) { return b.instanceName == name; });
    if (!known) {
      diags.error(DiagCategory::Model, "config.unknown_block",
                  "config names parameters for unknown block '" + name + "'");
    }
  }
  plan.wires.reserve(model.wireCount);
  for (std::size_t i = 0; i < model.wireCount; ++i) {
    const StaticWireRow& row = model.wires[i];
    plan.wires.push_back({row.fromBlock, row.fromPort, row.toBlock, row.toPort});
  }
  if (!diags.ok()) return std::nullopt;
  return plan;
}

int runGeneratedMain(const StaticModel& model, int argc, char** argv) {
  CLI::App app{"generated blockflow controller"};
  long steps = 0;
  auto* stepsOpt = app.add_option("--steps", steps, "number of steps to run");
  std::string pace = "free";
  app.add_option("--pace", pace, "pacing mode")
      ->check(CLI::IsMember({"free", "realtime"}));
  std::vector<std::string> logSpecs;
  app.add_option("--log", logSpecs, "log target, block.port=path");
  std::filesystem::path configPath;
  app.add_option("--config", configPath, "runtime config file");
  std::vector<std::filesystem::path> pluginDirs;
  app.add_option("--plugin-path", pluginDirs, "plugin search directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Diagnostics diags;
  engine::RunConfig runConfig;
  runConfig.steps =
      stepsOpt->count() > 0 ? std::optional<long>(steps) : std::nullopt;
  runConfig.pacing = pace == "realtime" ? engine::Pacing::RealTime
                                        : engine::Pacing::Free;
  for (const std::string& spec : logSpecs) {
    engine::LogTarget target;
    std::string error;
    if (!engine::parseLogTarget(spec, target, error)) {
      diags.error(DiagCategory::Model, "cli.bad_argument", "--log: " + error);
      continue;
    }
    runConfig.logTargets.push_back(std::move(target));
  }
  if (!diags.ok()) {
    std::cerr << diags.format();
    return exitCodeFor(diags);
  }

  if (configPath.empty()) {
    // The bundle's own config.json sits next to the executable.
    std::filesystem::path self(argv[0] != nullptr ? argv[0] : "");
    configPath = self.parent_path() / "config.json";
  }

  const auto config = loadRuntimeConfig(configPath, diags);
  if (!config) {
    std::cerr << diags.format();
    return exitCodeFor(diags);
  }
  const auto plan = planFromStatic(model, *config, diags);
  if (!plan) {
    std::cerr << diags.format();
    return exitCodeFor(diags);
  }

  plugin::PluginRegistry registry;
  for (const auto& dir : pluginDirs) registry.addSearchPath(dir);
  registry.addSearchPathsFromEnv();

  auto engine = engine::Engine::build(*plan, registry, runConfig, diags);
  if (!engine) {
    std::cerr << diags.format();
    return exitCodeFor(diags);
  }
  if (!diags.empty()) std::cerr << diags.format();

  gActiveEngine.store(engine.get());
  std::signal(SIGINT, onInterrupt);
  const engine::RunReport report = engine->run();
  std::signal(SIGINT, SIG_DFL);
  gActiveEngine.store(nullptr);

  std::fputs(engine::runReportToJson(report).c_str(), stdout);
  if (!engine->runDiagnostics().empty()) {
    std::cerr << engine->runDiagnostics().format();
  }
  diags.append(engine->runDiagnostics());
  return exitCodeFor(diags);
}

}  // namespace blockflow::codegen
