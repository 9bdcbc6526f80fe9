#include "blockflow/plugin/host_bridge.hpp"

#include <string>

#include "blockflow/core/parameter.hpp"

// Completes the opaque ABI type for the host side. Plugins never see this
// layout; they hold bf_context* purely as a token to pass back.
struct bf_context {
  blockflow::BlockContext* ctx = nullptr;
  // Non-null during declare_ports only; declared specs accumulate here.
  blockflow::PortLayout* layout = nullptr;
};

namespace blockflow::plugin {
namespace {

const Parameter* lookup(bf_context* c, int32_t scope, const char* name) {
  if (name == nullptr) return nullptr;
  if (scope == BF_SCOPE_PARAMETER) return c->ctx->findParameter(name);
  if (scope == BF_SCOPE_CONFIGURATION) return c->ctx->findConfiguration(name);
  return nullptr;
}

int32_t hostValueKind(bf_context* c, int32_t scope, const char* name) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr) return BF_VALUE_MISSING;
  switch (param->kind()) {
    case ParameterKind::Scalar:
      return BF_VALUE_SCALAR;
    case ParameterKind::Integer:
      return BF_VALUE_INT;
    case ParameterKind::Boolean:
      return BF_VALUE_BOOL;
    case ParameterKind::String:
      return BF_VALUE_STRING;
    case ParameterKind::Vector:
      return BF_VALUE_VECTOR;
  }
  return BF_VALUE_MISSING;
}

bf_status hostValueScalar(bf_context* c, int32_t scope, const char* name,
                          double* out) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr || out == nullptr) return 1;
  if (const double* v = std::get_if<double>(&param->value)) {
    *out = *v;
    return 0;
  }
  return 1;
}

bf_status hostValueInt(bf_context* c, int32_t scope, const char* name,
                       int64_t* out) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr || out == nullptr) return 1;
  if (const std::int64_t* v = std::get_if<std::int64_t>(&param->value)) {
    *out = *v;
    return 0;
  }
  return 1;
}

bf_status hostValueBool(bf_context* c, int32_t scope, const char* name,
                        int32_t* out) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr || out == nullptr) return 1;
  if (const bool* v = std::get_if<bool>(&param->value)) {
    *out = *v ? 1 : 0;
    return 0;
  }
  return 1;
}

bf_status hostValueString(bf_context* c, int32_t scope, const char* name,
                          const char** out, int32_t* length) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr || out == nullptr || length == nullptr) return 1;
  if (const std::string* v = std::get_if<std::string>(&param->value)) {
    *out = v->data();
    *length = static_cast<int32_t>(v->size());
    return 0;
  }
  return 1;
}

bf_status hostValueVector(bf_context* c, int32_t scope, const char* name,
                          const double** out, int32_t* length) {
  const Parameter* param = lookup(c, scope, name);
  if (param == nullptr || out == nullptr || length == nullptr) return 1;
  if (const auto* v = std::get_if<std::vector<double>>(&param->value)) {
    *out = v->data();
    *length = static_cast<int32_t>(v->size());
    return 0;
  }
  return 1;
}

bf_status hostDeclareInput(bf_context* c, bf_port_spec spec) {
  if (c->layout == nullptr) return 1;
  c->layout->addInput(spec.width, static_cast<DataType>(spec.dtype),
                      spec.direct_feedthrough != 0);
  return 0;
}

bf_status hostDeclareOutput(bf_context* c, bf_port_spec spec) {
  if (c->layout == nullptr) return 1;
  c->layout->addOutput(spec.width, static_cast<DataType>(spec.dtype));
  return 0;
}

bf_status hostDeclareFiniteOutputs(bf_context* c, int32_t enabled) {
  if (c->layout == nullptr) return 1;
  c->layout->finiteOutputs = enabled != 0;
  return 0;
}

int32_t hostInputCount(bf_context* c) { return c->ctx->inputCount(); }

int32_t hostOutputCount(bf_context* c) { return c->ctx->outputCount(); }

bf_status hostInputSpec(bf_context* c, int32_t index, bf_port_spec* out) {
  if (out == nullptr || index < 0 || index >= c->ctx->inputCount()) return 1;
  const PortSpec spec = c->ctx->inputSpec(index);
  out->index = spec.index;
  out->width = spec.width;
  out->dtype = static_cast<int32_t>(spec.dtype);
  out->direct_feedthrough = spec.directFeedthrough ? 1 : 0;
  return 0;
}

bf_status hostOutputSpec(bf_context* c, int32_t index, bf_port_spec* out) {
  if (out == nullptr || index < 0 || index >= c->ctx->outputCount()) return 1;
  const PortSpec spec = c->ctx->outputSpec(index);
  out->index = spec.index;
  out->width = spec.width;
  out->dtype = static_cast<int32_t>(spec.dtype);
  out->direct_feedthrough = 0;
  return 0;
}

const void* hostInputData(bf_context* c, int32_t index) {
  if (index < 0 || index >= c->ctx->inputCount()) return nullptr;
  return c->ctx->input(index).raw();
}

void* hostOutputData(bf_context* c, int32_t index) {
  if (index < 0 || index >= c->ctx->outputCount()) return nullptr;
  return c->ctx->output(index).raw();
}

double hostStepSize(bf_context* c) { return c->ctx->stepSize(); }

double hostSimTime(bf_context* c) { return c->ctx->simTime(); }

constexpr bf_context_api kContextApi = {
    hostValueKind,     hostValueScalar,  hostValueInt,
    hostValueBool,     hostValueString,  hostValueVector,
    hostDeclareInput,  hostDeclareOutput, hostDeclareFiniteOutputs,
    hostInputCount,    hostOutputCount,  hostInputSpec,
    hostOutputSpec,    hostInputData,    hostOutputData,
    hostStepSize,      hostSimTime,
};

}  // namespace

const bf_context_api* hostContextApi() { return &kContextApi; }

AbiBlockAdapter::~AbiBlockAdapter() {
  if (handle_ != nullptr && handle_->api != nullptr &&
      handle_->api->destroy != nullptr) {
    handle_->api->destroy(handle_);
  }
}

Status AbiBlockAdapter::forward(bf_status (*fn)(bf_block*, bf_context*,
                                                const bf_context_api*),
                                BlockContext& ctx, PortLayout* layout) {
  bf_context bridge;
  bridge.ctx = &ctx;
  bridge.layout = layout;
  if (fn(handle_, &bridge, hostContextApi()) == 0) return Status::success();
  const char* reason = handle_->api->last_error != nullptr
                           ? handle_->api->last_error(handle_)
                           : nullptr;
  return Status::failure(reason != nullptr && reason[0] != '\0'
                             ? std::string(reason)
                             : std::string("plugin call failed"));
}

Status AbiBlockAdapter::declarePorts(BlockContext& ctx, PortLayout& layout) {
  return forward(handle_->api->declare_ports, ctx, &layout);
}

Status AbiBlockAdapter::initialize(BlockContext& ctx) {
  return forward(handle_->api->initialize, ctx, nullptr);
}

Status AbiBlockAdapter::output(BlockContext& ctx) {
  return forward(handle_->api->output, ctx, nullptr);
}

Status AbiBlockAdapter::terminate(BlockContext& ctx) {
  return forward(handle_->api->terminate, ctx, nullptr);
}

}  // namespace blockflow::plugin
