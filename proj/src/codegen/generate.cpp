#include "blockflow/codegen/generate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "blockflow/codegen/runtime.hpp"
#include "blockflow/plugin/plugin_abi.h"
#include "blockflow/util/csv.hpp"
#include "blockflow/util/sha256.hpp"

namespace blockflow::codegen {
namespace {

/// Body of a C string literal. Octal escapes (always three digits) cannot
/// swallow a following character the way \x can.
std::string cEscape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        if (c < 0x20 || c >= 0x7F) {
          char buf[5];
          std::snprintf(buf, sizeof buf, "\\%03o", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::string quoted(std::string_view text) {
  return "\"" + cEscape(text) + "\"";
}

/// POSIX-shell single-quoting.
std::string shQuote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

bool writeFile(const std::filesystem::path& path, std::string_view content,
               Diagnostics& diags) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    diags.error(DiagCategory::Io, "io.write_failed",
                "cannot write '" + path.string() + "'");
    return false;
  }
  return true;
}

std::string mainSourceText() {
  return R"(// Generated bundle entry point. Topology lives in schedule_table.cpp,
// parameters in config.json next to the executable (or --config).
#include "blockflow/codegen/runtime.hpp"

extern const blockflow::codegen::StaticModel kControllerModel;

int main(int argc, char** argv) {
  return blockflow::codegen::runGeneratedMain(kControllerModel, argc, argv);
}
)";
}

std::string buildScriptText(const BundleOptions& options) {
  std::ostringstream out;
  out << "#!/bin/sh\n"
      << "# Compiles this bundle into ./controller. Parameters are read from\n"
      << "# config.json at startup; rebuild only when the sources change.\n"
      << "set -e\n"
      << "cd \"$(dirname \"$0\")\"\n"
      << "exec " << shQuote(options.compiler) << " -std=c++20 -O2 -I"
      << shQuote(options.includeDir.string())
      << " main.cpp schedule_table.cpp " << shQuote(options.runtimeLib.string())
      << " -ldl -pthread -o controller\n";
  return out.str();
}

std::string manifestText(const engine::ExecutionPlan& plan,
                         plugin::PluginRegistry& registry,
                         const std::map<std::string, std::string>& sources) {
  // (library -> labels used) in sorted order; registry entries are already
  // loaded by the time this runs.
  std::map<std::string, std::set<std::string>> labelsByLibrary;
  for (const auto& block : plan.blocks) {
    labelsByLibrary[block.libraryName].insert(block.classLabel);
  }

  std::ostringstream out;
  out << "blockflow bundle\n";
  out << "abi_version: " << BF_ABI_VERSION << "\n";
  out << "step_size: " << util::formatDouble(plan.stepSize) << "\n";
  out << "blocks: " << plan.blocks.size() << "\n";
  for (const auto& [library, labels] : labelsByLibrary) {
    const plugin::LoadedPlugin* loaded = registry.find(library);
    out << "plugin: " << library << "\n";
    out << "  sha256: " << (loaded != nullptr ? loaded->sha256 : "?") << "\n";
    out << "  labels:";
    for (const std::string& label : labels) out << " " << label;
    out << "\n";
  }
  for (const auto& [name, digest] : sources) {
    out << "source: " << name << "\n";
    out << "  sha256: " << digest << "\n";
  }
  out << "config: config.json\n";
  return out.str();
}

}  // namespace

std::string emitSchedulePreamble(const engine::ExecutionPlan& plan) {
  std::ostringstream out;
  out << "// Generated schedule tables: blocks in execution order, wires as\n"
         "// indices into that order. Data only; block logic stays in the\n"
         "// plugins this program loads at startup.\n"
         "#include \"blockflow/codegen/static_model.h\"\n"
         "\n"
         "namespace {\n"
         "\n";
  if (!plan.blocks.empty()) {
    out << "constexpr blockflow::codegen::StaticBlockRow kBlocks[] = {\n";
    for (const auto& block : plan.blocks) {
      out << "    {" << quoted(block.instanceName) << ", "
          << quoted(block.libraryName) << ", " << quoted(block.classLabel)
          << "},\n";
    }
    out << "};\n\n";
  }
  if (!plan.wires.empty()) {
    out << "constexpr blockflow::codegen::StaticWireRow kWires[] = {\n";
    for (const auto& wire : plan.wires) {
      out << "    {" << wire.fromBlock << ", " << wire.fromPort << ", "
          << wire.toBlock << ", " << wire.toPort << "},\n";
    }
    out << "};\n\n";
  }
  out << "}  // namespace\n"
         "\n"
         "extern const blockflow::codegen::StaticModel kControllerModel;\n"
         "const blockflow::codegen::StaticModel kControllerModel = {\n"
         "    "
      << util::formatDouble(plan.stepSize) << ",\n";
  if (plan.blocks.empty()) {
    out << "    nullptr, 0,\n";
  } else {
    out << "    kBlocks, " << plan.blocks.size() << ",\n";
  }
  if (plan.wires.empty()) {
    out << "    nullptr, 0,\n";
  } else {
    out << "    kWires, " << plan.wires.size() << ",\n";
  }
  out << "};\n";
  return out.str();
}

std::optional<GeneratedBundle> generate(const engine::ExecutionPlan& plan,
                                        plugin::PluginRegistry& registry,
                                        const BundleOptions& options,
                                        Diagnostics& diags) {
  if (options.outDir.empty() || options.includeDir.empty() ||
      options.runtimeLib.empty() || options.compiler.empty()) {
    diags.error(DiagCategory::Model, "codegen.bad_options",
                "outDir, includeDir, runtimeLib, and compiler must all be set");
    return std::nullopt;
  }

  // Every referenced plugin must be loadable and carry the labels the plan
  // uses; the bundle depends on the plugins only at run time, but emitting
  // one that cannot start is a generation-time error.
  bool pluginsOk = true;
  for (const auto& block : plan.blocks) {
    const plugin::LoadedPlugin* loaded = registry.load(block.libraryName, diags);
    if (loaded == nullptr) {
      pluginsOk = false;
      continue;
    }
    if (!loaded->manifest.hasLabel(block.classLabel)) {
      diags.error(DiagCategory::Plugin, "codegen.missing_label",
                  "plugin '" + block.libraryName + "' has no block '" +
                      block.classLabel + "' required by instance '" +
                      block.instanceName + "'",
                  block.instanceName);
      pluginsOk = false;
    }
  }
  if (!pluginsOk) return std::nullopt;

  std::error_code ec;
  std::filesystem::create_directories(options.outDir, ec);
  if (ec) {
    diags.error(DiagCategory::Io, "io.write_failed",
                "cannot create output directory '" + options.outDir.string() +
                    "': " + ec.message());
    return std::nullopt;
  }

  GeneratedBundle bundle;
  bundle.mainSource = options.outDir / "main.cpp";
  bundle.scheduleSource = options.outDir / "schedule_table.cpp";
  bundle.configFile = options.outDir / "config.json";
  bundle.manifestFile = options.outDir / "MANIFEST";
  bundle.buildScript = options.outDir / "build.sh";

  const std::string mainText = mainSourceText();
  const std::string scheduleText = emitSchedulePreamble(plan);
  std::map<std::string, std::string> sourceDigests;
  sourceDigests["main.cpp"] = util::sha256Hex(mainText);
  sourceDigests["schedule_table.cpp"] = util::sha256Hex(scheduleText);

  if (!writeFile(bundle.mainSource, mainText, diags)) return std::nullopt;
  if (!writeFile(bundle.scheduleSource, scheduleText, diags)) {
    return std::nullopt;
  }
  if (!writeFile(bundle.configFile, runtimeConfigText(plan), diags)) {
    return std::nullopt;
  }
  if (!writeFile(bundle.manifestFile,
                 manifestText(plan, registry, sourceDigests), diags)) {
    return std::nullopt;
  }
  if (!writeFile(bundle.buildScript, buildScriptText(options), diags)) {
    return std::nullopt;
  }
  std::filesystem::permissions(
      bundle.buildScript,
      std::filesystem::perms::owner_exec | std::filesystem::perms::group_exec |
          std::filesystem::perms::others_exec,
      std::filesystem::perm_options::add, ec);
  if (ec) {
    diags.error(DiagCategory::Io, "io.write_failed",
                "cannot mark '" + bundle.buildScript.string() +
                    "' executable: " + ec.message());
    return std::nullopt;
  }
  return bundle;
}

}  // namespace blockflow::codegen
