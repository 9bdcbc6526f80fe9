#pragma once

/**
 * @file host_bridge.hpp
 * @brief Host-side glue: drives a loaded bf_block through the core Block
 *        interface and serves bf_context_api callbacks from a BlockContext.
 *
 * Together with export.hpp this closes the loop across the flat ABI: the
 * engine only ever sees Block/BlockContext, the plugin only ever sees
 * bf_block/bf_context, and neither side depends on the other's layout.
 */

#include <memory>

#include "blockflow/core/block.hpp"
#include "blockflow/plugin/plugin_abi.h"

namespace blockflow::plugin {

/// The host's bf_context_api table. Functions expect the bf_context to be a
/// HostContext created by AbiBlockAdapter.
const bf_context_api* hostContextApi();

/// Presents a plugin-owned bf_block as an ordinary Block. Owns the handle;
/// destroys it through the plugin's own destroy callback.
class AbiBlockAdapter final : public Block {
 public:
  explicit AbiBlockAdapter(bf_block* handle) : handle_(handle) {}
  ~AbiBlockAdapter() override;

  AbiBlockAdapter(const AbiBlockAdapter&) = delete;
  AbiBlockAdapter& operator=(const AbiBlockAdapter&) = delete;

  Status declarePorts(BlockContext& ctx, PortLayout& layout) override;
  Status initialize(BlockContext& ctx) override;
  Status output(BlockContext& ctx) override;
  Status terminate(BlockContext& ctx) override;

 private:
  Status forward(bf_status (*fn)(bf_block*, bf_context*, const bf_context_api*),
                 BlockContext& ctx, PortLayout* layout);

  bf_block* handle_ = nullptr;
};

}  // namespace blockflow::plugin
