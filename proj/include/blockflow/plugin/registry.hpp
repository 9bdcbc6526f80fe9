#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "blockflow/core/block.hpp"
#include "blockflow/core/diagnostics.hpp"

namespace blockflow::plugin {

struct PluginManifest {
  int abiVersion = 0;
  std::vector<std::string> labels;

  bool hasLabel(std::string_view label) const;
};

/// One successfully loaded plugin library.
struct LoadedPlugin {
  std::string name;    // requested basename, e.g. "stdblocks"
  std::string path;    // resolved absolute file path
  std::string sha256;  // digest of the file bytes, as loaded
  PluginManifest manifest;
};

/// Finds, loads, and caches plugin libraries. Each library is loaded at most
/// once per registry; handles stay open for the registry's lifetime so block
/// instances never outlive their code.
///
/// Search order: paths added explicitly (CLI flag), then paths from the
/// BLOCKFLOW_PLUGIN_PATH environment variable. Within a directory the
/// platform-conventional name is probed first ("lib<name>.so"), then the
/// bare "<name>.so".
class PluginRegistry {
 public:
  PluginRegistry();
  ~PluginRegistry();
  PluginRegistry(const PluginRegistry&) = delete;
  PluginRegistry& operator=(const PluginRegistry&) = delete;

  void addSearchPath(std::filesystem::path dir);
  void addSearchPathsFromEnv(const char* variable = "BLOCKFLOW_PLUGIN_PATH");
  const std::vector<std::filesystem::path>& searchPaths() const {
    return searchPaths_;
  }

  /// Resolves a library basename to a file path. On failure, appends one
  /// diagnostic listing every probed candidate and returns empty.
  std::filesystem::path discover(std::string_view libraryName,
                                 Diagnostics& diags) const;

  /// Discovers, loads, and validates a library (cached). Returns nullptr on
  /// failure with diagnostics explaining why.
  const LoadedPlugin* load(std::string_view libraryName, Diagnostics& diags);

  /// Returns the cached entry without loading, or nullptr.
  const LoadedPlugin* find(std::string_view libraryName) const;

  /// Creates a fresh block instance for (libraryName, classLabel). Unknown
  /// labels produce a diagnostic naming the nearest manifest label.
  std::unique_ptr<Block> instantiate(std::string_view libraryName,
                                     std::string_view classLabel,
                                     Diagnostics& diags);

 private:
  struct Entry;

  Entry* loadLocked(std::string_view libraryName, Diagnostics& diags);

  std::vector<std::filesystem::path> searchPaths_;
  std::vector<std::unique_ptr<Entry>> loaded_;
  mutable std::mutex mutex_;
};

}  // namespace blockflow::plugin
