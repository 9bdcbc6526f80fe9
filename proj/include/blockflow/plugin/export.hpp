#pragma once

/**
 * @file export.hpp
 * @brief Plugin-side glue: exposes C++ Block implementations through the
 *        flat ABI in plugin_abi.h.
 *
 * A plugin lists its blocks in a table of BlockEntry and implements the two
 * exported symbols as one-liners:
 *
 *   extern "C" const bf_manifest* blockflow_plugin_manifest(void) {
 *     return blockflow::plugin::exportManifest(kEntries);
 *   }
 *   extern "C" bf_block* blockflow_create(const char* label) {
 *     return blockflow::plugin::exportCreate(kEntries, label);
 *   }
 */

#include <memory>
#include <span>
#include <string_view>

#include "blockflow/core/block.hpp"
#include "blockflow/plugin/plugin_abi.h"

namespace blockflow::plugin {

struct BlockEntry {
  const char* label;
  std::unique_ptr<Block> (*make)();
};

template <typename T>
std::unique_ptr<Block> makeBlock() {
  return std::make_unique<T>();
}

/// Builds (once) and returns the manifest for an entry table.
const bf_manifest* exportManifest(std::span<const BlockEntry> entries);

/// Instantiates the entry matching `label`, wrapped for the flat ABI.
/// Returns nullptr for unknown labels or when the factory yields nothing.
bf_block* exportCreate(std::span<const BlockEntry> entries, const char* label);

/// Wraps an already-constructed block. Exposed for test plugins that need
/// manifest entries whose factory intentionally misbehaves.
bf_block* wrapBlock(std::unique_ptr<Block> block);

/// Plugin-side BlockContext backed by the host's bf_context_api table.
/// Parameter lookups are materialized lazily and cached for the lifetime of
/// this client (one lifecycle call).
class AbiContextClient : public BlockContext {
 public:
  AbiContextClient(bf_context* ctx, const bf_context_api* host)
      : ctx_(ctx), host_(host) {}

  const Parameter* findParameter(std::string_view name) const override;
  const Parameter* findConfiguration(std::string_view name) const override;
  int inputCount() const override;
  int outputCount() const override;
  PortSpec inputSpec(int index) const override;
  PortSpec outputSpec(int index) const override;
  SignalReadView input(int index) const override;
  SignalView output(int index) override;
  double stepSize() const override;
  double simTime() const override;

 private:
  const Parameter* fetch(int scope, std::string_view name) const;

  bf_context* ctx_;
  const bf_context_api* host_;
  mutable std::vector<std::unique_ptr<Parameter>> cache_;
};

}  // namespace blockflow::plugin
