#include "blockflow/plugin/registry.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "blockflow/plugin/host_bridge.hpp"
#include "blockflow/plugin/plugin_abi.h"
#include "blockflow/util/sha256.hpp"
#include "blockflow/util/strings.hpp"

namespace blockflow::plugin {

namespace fs = std::filesystem;

bool PluginManifest::hasLabel(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

struct PluginRegistry::Entry {
  LoadedPlugin info;
  void* handle = nullptr;
  bf_factory_fn factory = nullptr;
};

PluginRegistry::PluginRegistry() = default;

PluginRegistry::~PluginRegistry() {
  // Handles are intentionally not dlclose()d: the registry may be destroyed
  // while engines still hold block instances whose vtables live in the
  // plugin. Leaking the handle until process exit is the safe default.
}

void PluginRegistry::addSearchPath(fs::path dir) {
  if (!dir.empty()) searchPaths_.push_back(std::move(dir));
}

void PluginRegistry::addSearchPathsFromEnv(const char* variable) {
  const char* value = std::getenv(variable);
  if (value == nullptr || value[0] == '\0') return;
  for (const std::string& part : util::split(value, ':')) {
    if (!part.empty()) searchPaths_.push_back(part);
  }
}

fs::path PluginRegistry::discover(std::string_view libraryName,
                                  Diagnostics& diags) const {
  const std::string name(libraryName);
  std::vector<fs::path> probed;
  for (const fs::path& dir : searchPaths_) {
    for (const std::string& file : {"lib" + name + ".so", name + ".so"}) {
      fs::path candidate = dir / file;
      std::error_code ec;
      if (fs::exists(candidate, ec)) return fs::absolute(candidate);
      probed.push_back(std::move(candidate));
    }
  }
  std::ostringstream msg;
  msg << "plugin library '" << name << "' not found; probed:";
  if (probed.empty()) msg << " (no search paths configured)";
  for (const fs::path& p : probed) msg << ' ' << p.string();
  diags.error(DiagCategory::Plugin, "plugin.not_found", msg.str());
  return {};
}

PluginRegistry::Entry* PluginRegistry::loadLocked(std::string_view libraryName,
                                                  Diagnostics& diags) {
  for (auto& entry : loaded_) {
    if (entry->info.name == libraryName) return entry.get();
  }

  const fs::path path = discover(libraryName, diags);
  if (path.empty()) return nullptr;

  void* handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (handle == nullptr) {
    const char* why = dlerror();
    diags.error(DiagCategory::Plugin, "plugin.load_failed",
                "cannot load '" + path.string() + "': " +
                    (why != nullptr ? why : "unknown dlopen failure"));
    return nullptr;
  }

  auto manifestFn =
      reinterpret_cast<bf_manifest_fn>(dlsym(handle, BF_MANIFEST_SYMBOL));
  auto factoryFn =
      reinterpret_cast<bf_factory_fn>(dlsym(handle, BF_FACTORY_SYMBOL));
  if (manifestFn == nullptr || factoryFn == nullptr) {
    diags.error(DiagCategory::Plugin, "plugin.missing_symbol",
                "'" + path.string() + "' does not export " +
                    (manifestFn == nullptr ? BF_MANIFEST_SYMBOL
                                           : BF_FACTORY_SYMBOL) +
                    std::string("; not a plugin library"));
    dlclose(handle);
    return nullptr;
  }

  const bf_manifest* manifest = manifestFn();
  if (manifest == nullptr) {
    diags.error(DiagCategory::Plugin, "plugin.bad_manifest",
                "'" + path.string() + "' returned no manifest");
    dlclose(handle);
    return nullptr;
  }
  if (manifest->abi_version != BF_ABI_VERSION) {
    diags.error(DiagCategory::Plugin, "plugin.abi_mismatch",
                "'" + path.string() + "': plugin ABI " +
                    std::to_string(manifest->abi_version) + ", host ABI " +
                    std::to_string(BF_ABI_VERSION));
    dlclose(handle);
    return nullptr;
  }
  if (manifest->label_count <= 0 || manifest->labels == nullptr) {
    diags.error(DiagCategory::Plugin, "plugin.bad_manifest",
                "'" + path.string() + "' declares no block labels");
    dlclose(handle);
    return nullptr;
  }

  auto entry = std::make_unique<Entry>();
  entry->info.name = std::string(libraryName);
  entry->info.path = path.string();
  entry->handle = handle;
  entry->factory = factoryFn;
  entry->info.manifest.abiVersion = manifest->abi_version;

  std::set<std::string_view> seen;
  for (int32_t i = 0; i < manifest->label_count; ++i) {
    const char* label = manifest->labels[i];
    if (label == nullptr || label[0] == '\0' || !seen.insert(label).second) {
      diags.error(DiagCategory::Plugin, "plugin.bad_manifest",
                  "'" + path.string() +
                      "' manifest has an empty or duplicate label");
      dlclose(handle);
      return nullptr;
    }
    entry->info.manifest.labels.emplace_back(label);
  }

  if (auto digest = util::sha256File(path)) {
    entry->info.sha256 = *digest;
  } else {
    diags.error(DiagCategory::Io, "io.read_failed",
                "cannot read '" + path.string() + "' for checksumming");
    dlclose(handle);
    return nullptr;
  }

  loaded_.push_back(std::move(entry));
  return loaded_.back().get();
}

const LoadedPlugin* PluginRegistry::load(std::string_view libraryName,
                                         Diagnostics& diags) {
  std::lock_guard<std::mutex> lock(mutex_);
  Entry* entry = loadLocked(libraryName, diags);
  return entry != nullptr ? &entry->info : nullptr;
}

const LoadedPlugin* PluginRegistry::find(std::string_view libraryName) const {
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& entry : loaded_) {
    if (entry->info.name == libraryName) return &entry->info;
  }
  return nullptr;
}

std::unique_ptr<Block> PluginRegistry::instantiate(std::string_view libraryName,
                                                   std::string_view classLabel,
                                                   Diagnostics& diags) {
  std::unique_lock<std::mutex> lock(mutex_);
  Entry* entry = loadLocked(libraryName, diags);
  if (entry == nullptr) return nullptr;

  const std::string label(classLabel);
  if (!entry->info.manifest.hasLabel(label)) {
    std::string message = "library '" + entry->info.name +
                          "' has no block labeled '" + label + "'";
    const std::string nearest =
        util::nearestCandidate(label, entry->info.manifest.labels);
    if (!nearest.empty()) message += "; did you mean '" + nearest + "'?";
    message +=
        " (available: " + util::join(entry->info.manifest.labels, ", ") + ")";
    diags.error(DiagCategory::Plugin, "plugin.unknown_label", message);
    return nullptr;
  }

  bf_factory_fn factory = entry->factory;
  lock.unlock();  // instantiation may be slow; cache is already stable

  bf_block* raw = factory(label.c_str());
  if (raw == nullptr || raw->api == nullptr ||
      raw->api->declare_ports == nullptr || raw->api->output == nullptr ||
      raw->api->destroy == nullptr) {
    if (raw != nullptr && raw->api != nullptr && raw->api->destroy != nullptr) {
      raw->api->destroy(raw);
    }
    diags.error(DiagCategory::Plugin, "plugin.factory_failed",
                "factory of '" + std::string(libraryName) +
                    "' returned nothing usable for label '" + label + "'");
    return nullptr;
  }
  return std::make_unique<AbiBlockAdapter>(raw);
}

}  // namespace blockflow::plugin
