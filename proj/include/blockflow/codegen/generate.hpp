#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "blockflow/core/diagnostics.hpp"
#include "blockflow/engine/plan.hpp"
#include "blockflow/plugin/registry.hpp"

namespace blockflow::codegen {

/// Where a bundle's build script finds the pieces it links against. The CLI
/// fills these with the paths of the build tree it was compiled in; they can
/// be overridden per invocation.
struct BundleOptions {
  std::filesystem::path outDir;
  std::filesystem::path includeDir;   // root of the blockflow headers
  std::filesystem::path runtimeLib;   // static runtime library to link
  std::string compiler = "c++";
};

struct GeneratedBundle {
  std::filesystem::path mainSource;      // main.cpp
  std::filesystem::path scheduleSource;  // schedule_table.cpp
  std::filesystem::path configFile;      // config.json (editable)
  std::filesystem::path manifestFile;    // MANIFEST
  std::filesystem::path buildScript;     // build.sh
};

/// The schedule-table fragment of the generated sources: blocks as an
/// ordered data table plus index-based wires, O(blocks) in size. Exposed
/// separately so its shape can be checked without touching the filesystem.
std::string emitSchedulePreamble(const engine::ExecutionPlan& plan);

/// Emits a standalone bundle for `plan` into options.outDir: sources, the
/// editable config.json, a MANIFEST recording the host ABI version plus
/// plugin and source checksums, and a build script. Every plugin the plan
/// references must be loadable through `registry` (labels are verified
/// against its manifest); the bundle itself depends on the plugins only at
/// run time.
std::optional<GeneratedBundle> generate(const engine::ExecutionPlan& plan,
                                        plugin::PluginRegistry& registry,
                                        const BundleOptions& options,
                                        Diagnostics& diags);

}  // namespace blockflow::codegen
