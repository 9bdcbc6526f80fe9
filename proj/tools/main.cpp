#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blockflow/codegen/generate.hpp"
#include "blockflow/engine/engine.hpp"
#include "blockflow/graph/load.hpp"
#include "blockflow/graph/validate.hpp"
#include "blockflow/plugin/plugin_abi.h"
#include "blockflow/plugin/registry.hpp"

// Build-tree defaults for codegen bundle options, injected by the build so
// `blockflow codegen --out dir` works without extra flags.
#ifndef BLOCKFLOW_INCLUDE_DIR
#define BLOCKFLOW_INCLUDE_DIR ""
#endif
#ifndef BLOCKFLOW_RUNTIME_LIB
#define BLOCKFLOW_RUNTIME_LIB ""
#endif
#ifndef BLOCKFLOW_CXX_COMPILER
#define BLOCKFLOW_CXX_COMPILER "c++"
#endif

namespace {

using namespace blockflow;

const char* categoryName(DiagCategory category) {
  switch (category) {
    case DiagCategory::Model:
      return "model";
    case DiagCategory::Plugin:
      return "plugin";
    case DiagCategory::Io:
      return "io";
    case DiagCategory::Runtime:
      return "runtime";
  }
  return "model";
}

/// Diagnostics go to stderr: human-readable lines by default, a JSON array
/// with --json.
void printDiags(const Diagnostics& diags, bool asJson) {
  if (diags.empty()) return;
  if (!asJson) {
    std::cerr << diags.format();
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const Diagnostic& d : diags.items()) {
    arr.push_back(
        {{"severity", d.severity == DiagSeverity::Error ? "error" : "warning"},
         {"category", categoryName(d.category)},
         {"code", d.code},
         {"message", d.message},
         {"instance", d.instance}});
  }
  std::cerr << arr.dump(2) << "\n";
}

void configureRegistry(plugin::PluginRegistry& registry,
                       const std::vector<std::filesystem::path>& dirs) {
  for (const auto& dir : dirs) registry.addSearchPath(dir);
  registry.addSearchPathsFromEnv();
}

std::atomic<engine::Engine*> gActiveEngine{nullptr};

void onInterrupt(int) {
  if (auto* engine = gActiveEngine.load()) engine->requestStop();
}

struct ValidateArgs {
  std::string graphPath;
  std::vector<std::filesystem::path> pluginDirs;
};

struct RunArgs {
  std::string graphPath;
  std::vector<std::filesystem::path> pluginDirs;
  long steps = 0;
  bool stepsGiven = false;
  std::string pace = "free";
  std::vector<std::string> logSpecs;
  std::vector<std::string> setSpecs;
};

struct CodegenArgs {
  std::string graphPath;
  std::vector<std::filesystem::path> pluginDirs;
  codegen::BundleOptions options;
};

struct BlocksArgs {
  std::string library;
  std::vector<std::filesystem::path> pluginDirs;
};

/// Shared front half of every graph subcommand: parse, instantiate, declare,
/// resolve, schedule. Returns nothing once diagnostics carry an error.
struct ValidatedGraph {
  graph::GraphModel model;
  graph::ValidationResult result;
};

std::optional<ValidatedGraph> validateGraph(const std::string& path,
                                            plugin::PluginRegistry& registry,
                                            Diagnostics& diags) {
  auto model = graph::loadGraph(path, diags);
  if (!model) return std::nullopt;
  auto result = graph::validate(*model, registry, diags);
  if (!result.complete() || !diags.ok()) return std::nullopt;
  return ValidatedGraph{std::move(*model), std::move(result)};
}

int cmdValidate(const ValidateArgs& args, bool asJson) {
  Diagnostics diags;
  plugin::PluginRegistry registry;
  configureRegistry(registry, args.pluginDirs);
  validateGraph(args.graphPath, registry, diags);
  printDiags(diags, asJson);
  return exitCodeFor(diags);
}

int cmdSchedule(const ValidateArgs& args, bool asJson) {
  Diagnostics diags;
  plugin::PluginRegistry registry;
  configureRegistry(registry, args.pluginDirs);
  auto validated = validateGraph(args.graphPath, registry, diags);
  printDiags(diags, asJson);
  if (!validated) return exitCodeFor(diags);
  std::fputs(validated->result.schedule->toJson().c_str(), stdout);
  return 0;
}

int cmdRun(const RunArgs& args, bool asJson) {
  Diagnostics diags;
  engine::RunConfig config;
  config.steps =
      args.stepsGiven ? std::optional<long>(args.steps) : std::nullopt;
  config.pacing = args.pace == "realtime" ? engine::Pacing::RealTime
                                          : engine::Pacing::Free;
  for (const std::string& spec : args.logSpecs) {
    engine::LogTarget target;
    std::string error;
    if (!engine::parseLogTarget(spec, target, error)) {
      diags.error(DiagCategory::Model, "cli.bad_argument", "--log: " + error);
      continue;
    }
    config.logTargets.push_back(std::move(target));
  }
  for (const std::string& spec : args.setSpecs) {
    engine::ParameterOverride entry;
    std::string error;
    if (!engine::parseOverride(spec, entry, error)) {
      diags.error(DiagCategory::Model, "cli.bad_argument", "--set: " + error);
      continue;
    }
    config.overrides.push_back(std::move(entry));
  }
  if (!diags.ok()) {
    printDiags(diags, asJson);
    return exitCodeFor(diags);
  }

  plugin::PluginRegistry registry;
  configureRegistry(registry, args.pluginDirs);
  auto validated = validateGraph(args.graphPath, registry, diags);
  if (!validated) {
    printDiags(diags, asJson);
    return exitCodeFor(diags);
  }
  const engine::ExecutionPlan plan = engine::makePlan(
      validated->model, *validated->result.schedule,
      validated->result.wires);

  auto engine = engine::Engine::build(plan, registry, config, diags);
  if (!engine) {
    printDiags(diags, asJson);
    return exitCodeFor(diags);
  }

  gActiveEngine.store(engine.get());
  std::signal(SIGINT, onInterrupt);
  const engine::RunReport report = engine->run();
  std::signal(SIGINT, SIG_DFL);
  gActiveEngine.store(nullptr);

  std::fputs(engine::runReportToJson(report).c_str(), stdout);
  diags.append(engine->runDiagnostics());
  printDiags(diags, asJson);
  return exitCodeFor(diags);
}

int cmdCodegen(const CodegenArgs& args, bool asJson) {
  Diagnostics diags;
  plugin::PluginRegistry registry;
  configureRegistry(registry, args.pluginDirs);
  auto validated = validateGraph(args.graphPath, registry, diags);
  if (!validated) {
    printDiags(diags, asJson);
    return exitCodeFor(diags);
  }
  const engine::ExecutionPlan plan = engine::makePlan(
      validated->model, *validated->result.schedule,
      validated->result.wires);
  auto bundle = codegen::generate(plan, registry, args.options, diags);
  printDiags(diags, asJson);
  if (!bundle) return exitCodeFor(diags);
  std::printf("%s\n", bundle->manifestFile.string().c_str());
  return 0;
}

int cmdBlocks(const BlocksArgs& args, bool asJson) {
  Diagnostics diags;
  plugin::PluginRegistry registry;
  configureRegistry(registry, args.pluginDirs);
  const plugin::LoadedPlugin* loaded = registry.load(args.library, diags);
  printDiags(diags, asJson);
  if (loaded == nullptr) return exitCodeFor(diags);
  std::printf("library: %s\n", loaded->name.c_str());
  std::printf("path: %s\n", loaded->path.c_str());
  std::printf("abi_version: %d\n", loaded->manifest.abiVersion);
  std::printf("blocks:\n");
  for (const std::string& label : loaded->manifest.labels) {
    std::printf("  %s\n", label.c_str());
  }
  return 0;
}

void addPluginPathOption(CLI::App* cmd,
                         std::vector<std::filesystem::path>& dirs) {
  cmd->add_option("--plugin-path", dirs,
                  "plugin search directory (repeatable; searched before "
                  "BLOCKFLOW_PLUGIN_PATH)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blockflow: validate, run, and generate code for block-diagram "
               "controllers"};
  app.require_subcommand(1);
  bool asJson = false;
  app.add_flag("--json", asJson, "machine-readable diagnostics on stderr");

  ValidateArgs validateArgs;
  auto* validateCmd =
      app.add_subcommand("validate", "check a graph file against its plugins");
  validateCmd->add_option("graph", validateArgs.graphPath, "graph file")
      ->required();
  addPluginPathOption(validateCmd, validateArgs.pluginDirs);

  ValidateArgs scheduleArgs;
  auto* scheduleCmd = app.add_subcommand(
      "schedule", "print the computed execution schedule as JSON");
  scheduleCmd->add_option("graph", scheduleArgs.graphPath, "graph file")
      ->required();
  addPluginPathOption(scheduleCmd, scheduleArgs.pluginDirs);

  RunArgs runArgs;
  auto* runCmd = app.add_subcommand("run", "execute a graph");
  runCmd->add_option("graph", runArgs.graphPath, "graph file")->required();
  auto* stepsOpt = runCmd->add_option(
      "--steps", runArgs.steps, "steps to run (omit to run until SIGINT)");
  runCmd->add_option("--pace", runArgs.pace, "pacing mode")
      ->check(CLI::IsMember({"free", "realtime"}));
  runCmd->add_option("--log", runArgs.logSpecs,
                     "log an output port to CSV, block.port=path");
  runCmd->add_option("--set", runArgs.setSpecs,
                     "override a block parameter, block.param=value");
  addPluginPathOption(runCmd, runArgs.pluginDirs);

  CodegenArgs codegenArgs;
  codegenArgs.options.includeDir = BLOCKFLOW_INCLUDE_DIR;
  codegenArgs.options.runtimeLib = BLOCKFLOW_RUNTIME_LIB;
  codegenArgs.options.compiler = BLOCKFLOW_CXX_COMPILER;
  auto* codegenCmd =
      app.add_subcommand("codegen", "emit a standalone program bundle");
  codegenCmd->add_option("graph", codegenArgs.graphPath, "graph file")
      ->required();
  codegenCmd->add_option("--out", codegenArgs.options.outDir, "bundle directory")
      ->required();
  codegenCmd->add_option("--include-dir", codegenArgs.options.includeDir,
                         "header root the bundle compiles against");
  codegenCmd->add_option("--runtime-lib", codegenArgs.options.runtimeLib,
                         "runtime library the bundle links");
  codegenCmd->add_option("--compiler", codegenArgs.options.compiler,
                         "compiler command written into build.sh");
  addPluginPathOption(codegenCmd, codegenArgs.pluginDirs);

  BlocksArgs blocksArgs;
  auto* blocksCmd =
      app.add_subcommand("blocks", "list the blocks a plugin library ships");
  blocksCmd->add_option("--library", blocksArgs.library, "plugin library name")
      ->required();
  addPluginPathOption(blocksCmd, blocksArgs.pluginDirs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  runArgs.stepsGiven = stepsOpt->count() > 0;

  if (validateCmd->parsed()) return cmdValidate(validateArgs, asJson);
  if (scheduleCmd->parsed()) return cmdSchedule(scheduleArgs, asJson);
  if (runCmd->parsed()) return cmdRun(runArgs, asJson);
  if (codegenCmd->parsed()) return cmdCodegen(codegenArgs, asJson);
  if (blocksCmd->parsed()) return cmdBlocks(blocksArgs, asJson);
  return 1;
}
