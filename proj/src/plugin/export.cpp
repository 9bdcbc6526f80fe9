#include "blockflow/plugin/export.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockflow::plugin {
namespace {

PortSpec fromAbi(const bf_port_spec& spec, PortDirection direction) {
  PortSpec out;
  out.index = spec.index;
  out.width = spec.width;
  out.dtype = static_cast<DataType>(spec.dtype);
  out.direction = direction;
  out.directFeedthrough = spec.direct_feedthrough != 0;
  return out;
}

bf_port_spec toAbi(const PortSpec& spec) {
  bf_port_spec out;
  out.index = spec.index;
  out.width = spec.width;
  out.dtype = static_cast<int32_t>(spec.dtype);
  out.direct_feedthrough = spec.directFeedthrough ? 1 : 0;
  return out;
}

/// One exported instance: the ABI header followed by the wrapped block.
struct ExportedBlock {
  bf_block base;
  std::unique_ptr<Block> impl;
  std::string lastError;
};

ExportedBlock* self(bf_block* block) {
  return reinterpret_cast<ExportedBlock*>(block);
}

bf_status guard(ExportedBlock* block, Status (*call)(ExportedBlock&,
                                                     AbiContextClient&),
                bf_context* ctx, const bf_context_api* host) {
  try {
    AbiContextClient client(ctx, host);
    const Status status = call(*block, client);
    if (status.ok()) return 0;
    block->lastError = status.message;
  } catch (const std::exception& e) {
    block->lastError = e.what();
  } catch (...) {
    block->lastError = "unknown failure";
  }
  return 1;
}

bf_status abiDeclarePorts(bf_block* raw, bf_context* ctx,
                          const bf_context_api* host) {
  ExportedBlock* block = self(raw);
  try {
    AbiContextClient client(ctx, host);
    PortLayout layout;
    const Status status = block->impl->declarePorts(client, layout);
    if (!status.ok()) {
      block->lastError = status.message;
      return 1;
    }
    for (const PortSpec& spec : layout.inputs) {
      if (host->declare_input(ctx, toAbi(spec)) != 0) return 1;
    }
    for (const PortSpec& spec : layout.outputs) {
      if (host->declare_output(ctx, toAbi(spec)) != 0) return 1;
    }
    if (layout.finiteOutputs) {
      if (host->declare_finite_outputs(ctx, 1) != 0) return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    block->lastError = e.what();
    return 1;
  } catch (...) {
    block->lastError = "unknown failure";
    return 1;
  }
}

bf_status abiInitialize(bf_block* raw, bf_context* ctx,
                        const bf_context_api* host) {
  return guard(
      self(raw),
      [](ExportedBlock& b, AbiContextClient& c) { return b.impl->initialize(c); },
      ctx, host);
}

bf_status abiOutput(bf_block* raw, bf_context* ctx,
                    const bf_context_api* host) {
  return guard(
      self(raw),
      [](ExportedBlock& b, AbiContextClient& c) { return b.impl->output(c); },
      ctx, host);
}

bf_status abiTerminate(bf_block* raw, bf_context* ctx,
                       const bf_context_api* host) {
  return guard(
      self(raw),
      [](ExportedBlock& b, AbiContextClient& c) { return b.impl->terminate(c); },
      ctx, host);
}

const char* abiLastError(bf_block* raw) { return self(raw)->lastError.c_str(); }

void abiDestroy(bf_block* raw) { delete self(raw); }

constexpr bf_block_api kBlockApi = {
    abiDeclarePorts, abiInitialize, abiOutput,
    abiTerminate,    abiLastError,  abiDestroy,
};

/// Manifests are built once per entry table and kept alive for the process.
struct ManifestHolder {
  std::vector<const char*> labels;
  bf_manifest manifest;
};

}  // namespace

const bf_manifest* exportManifest(std::span<const BlockEntry> entries) {
  static std::mutex mutex;
  static std::map<const BlockEntry*, std::unique_ptr<ManifestHolder>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& holder = cache[entries.data()];
  if (!holder) {
    holder = std::make_unique<ManifestHolder>();
    for (const BlockEntry& entry : entries) {
      holder->labels.push_back(entry.label);
    }
    holder->manifest.abi_version = BF_ABI_VERSION;
    holder->manifest.label_count = static_cast<int32_t>(holder->labels.size());
    holder->manifest.labels = holder->labels.data();
  }
  return &holder->manifest;
}

bf_block* exportCreate(std::span<const BlockEntry> entries,
                       const char* label) {
  if (label == nullptr) return nullptr;
  for (const BlockEntry& entry : entries) {
    if (std::strcmp(entry.label, label) == 0) {
      std::unique_ptr<Block> impl = entry.make();
      if (!impl) return nullptr;
      return wrapBlock(std::move(impl));
    }
  }
  return nullptr;
}

bf_block* wrapBlock(std::unique_ptr<Block> block) {
  auto* exported = new ExportedBlock{};
  exported->base.api = &kBlockApi;
  exported->impl = std::move(block);
  return &exported->base;
}

const Parameter* AbiContextClient::fetch(int scope,
                                         std::string_view name) const {
  const std::string key(name);
  const int32_t kind = host_->value_kind(ctx_, scope, key.c_str());
  if (kind == BF_VALUE_MISSING) return nullptr;
  auto param = std::make_unique<Parameter>();
  param->name = key;
  switch (kind) {
    case BF_VALUE_SCALAR: {
      double v = 0;
      if (host_->value_scalar(ctx_, scope, key.c_str(), &v) != 0) return nullptr;
      param->value = v;
      break;
    }
    case BF_VALUE_INT: {
      int64_t v = 0;
      if (host_->value_int(ctx_, scope, key.c_str(), &v) != 0) return nullptr;
      param->value = static_cast<std::int64_t>(v);
      break;
    }
    case BF_VALUE_BOOL: {
      int32_t v = 0;
      if (host_->value_bool(ctx_, scope, key.c_str(), &v) != 0) return nullptr;
      param->value = v != 0;
      break;
    }
    case BF_VALUE_STRING: {
      const char* text = nullptr;
      int32_t length = 0;
      if (host_->value_string(ctx_, scope, key.c_str(), &text, &length) != 0) {
        return nullptr;
      }
      param->value = std::string(text, static_cast<std::size_t>(length));
      break;
    }
    case BF_VALUE_VECTOR: {
      const double* data = nullptr;
      int32_t length = 0;
      if (host_->value_vector(ctx_, scope, key.c_str(), &data, &length) != 0) {
        return nullptr;
      }
      param->value =
          std::vector<double>(data, data + static_cast<std::size_t>(length));
      break;
    }
    default:
      return nullptr;
  }
  cache_.push_back(std::move(param));
  return cache_.back().get();
}

const Parameter* AbiContextClient::findParameter(std::string_view name) const {
  return fetch(BF_SCOPE_PARAMETER, name);
}

const Parameter* AbiContextClient::findConfiguration(
    std::string_view name) const {
  return fetch(BF_SCOPE_CONFIGURATION, name);
}

int AbiContextClient::inputCount() const { return host_->input_count(ctx_); }

int AbiContextClient::outputCount() const { return host_->output_count(ctx_); }

PortSpec AbiContextClient::inputSpec(int index) const {
  bf_port_spec spec;
  if (host_->input_spec(ctx_, index, &spec) != 0) {
    throw std::logic_error("input spec unavailable for port " +
                           std::to_string(index));
  }
  return fromAbi(spec, PortDirection::Input);
}

PortSpec AbiContextClient::outputSpec(int index) const {
  bf_port_spec spec;
  if (host_->output_spec(ctx_, index, &spec) != 0) {
    throw std::logic_error("output spec unavailable for port " +
                           std::to_string(index));
  }
  return fromAbi(spec, PortDirection::Output);
}

SignalReadView AbiContextClient::input(int index) const {
  const void* data = host_->input_data(ctx_, index);
  if (data == nullptr) {
    throw std::logic_error("input signal unavailable for port " +
                           std::to_string(index));
  }
  const PortSpec spec = inputSpec(index);
  return {spec.dtype, spec.width, data};
}

SignalView AbiContextClient::output(int index) {
  void* data = host_->output_data(ctx_, index);
  if (data == nullptr) {
    throw std::logic_error("output signal unavailable for port " +
                           std::to_string(index));
  }
  const PortSpec spec = outputSpec(index);
  return {spec.dtype, spec.width, data};
}

double AbiContextClient::stepSize() const { return host_->step_size(ctx_); }

double AbiContextClient::simTime() const { return host_->sim_time(ctx_); }

}  // namespace blockflow::plugin
