#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blockflow/codegen/static_model.h"
#include "blockflow/core/diagnostics.hpp"
#include "blockflow/engine/plan.hpp"

namespace blockflow::codegen {

/// The editable half of a generated bundle: model configuration plus every
/// block's parameters, keyed by instance name. Loaded at program startup
/// from config.json.
struct RuntimeConfig {
  std::vector<Parameter> configuration;
  std::map<std::string, std::vector<Parameter>> parameters;
};

/// Reads a bundle config.json. Structure errors and unreadable files are
/// reported through `diags`.
std::optional<RuntimeConfig> loadRuntimeConfig(
    const std::filesystem::path& path, Diagnostics& diags);

/// Serialized form of the config for plan `plan`, as generate() writes it.
std::string runtimeConfigText(const engine::ExecutionPlan& plan);

/// Recombines baked topology with a loaded config into the plan form the
/// engine executes. Config entries for unknown block names are rejected
/// ("config.unknown_block"): a typo would otherwise silently fall back to
/// block defaults.
std::optional<engine::ExecutionPlan> planFromStatic(
    const StaticModel& model, const RuntimeConfig& config,
    Diagnostics& diags);

/// Entry point for generated bundles: parses run flags (mirroring the
/// interpreter CLI: --steps, --pace, --log, --plugin-path, plus --config to
/// relocate config.json), builds the engine, runs, prints the run report as
/// JSON on stdout, and returns the process exit code.
int runGeneratedMain(const StaticModel& model, int argc, char** argv);

}  // namespace blockflow::codegen
