#include "blockflow/graph/validate.hpp"

namespace blockflow::graph {

bool declarePorts(Block& instance, const BlockDescriptor& descriptor,
                  std::span<const Parameter> configuration, double stepSize,
                  PortLayout& layout, Diagnostics& diags) {
  DeclareContext ctx(descriptor, configuration, stepSize);
  Status status = Status::success();
  try {
    status = instance.declarePorts(ctx, layout);
  } catch (const std::exception& e) {
    status = Status::failure(e.what());
  }
  if (!status.ok()) {
    diags.error(DiagCategory::Model, "graph.declare_failed",
                "block '" + descriptor.instanceName + "' (" +
                    descriptor.libraryName + "/" + descriptor.classLabel +
                    ") failed to declare ports: " + status.message,
                descriptor.instanceName);
    return false;
  }
  for (const PortSpec& spec : layout.inputs) {
    if (spec.width <= 0 && spec.width != kDynamicWidth) {
      diags.error(DiagCategory::Model, "graph.bad_width",
                  "block '" + descriptor.instanceName + "' declares input " +
                      std::to_string(spec.index) + " with invalid width " +
                      std::to_string(spec.width),
                  descriptor.instanceName);
      return false;
    }
  }
  for (const PortSpec& spec : layout.outputs) {
    if (spec.width <= 0 && spec.width != kDynamicWidth) {
      diags.error(DiagCategory::Model, "graph.bad_width",
                  "block '" + descriptor.instanceName + "' declares output " +
                      std::to_string(spec.index) + " with invalid width " +
                      std::to_string(spec.width),
                  descriptor.instanceName);
      return false;
    }
  }
  return true;
}

ValidationResult validate(const GraphModel& model,
                          plugin::PluginRegistry& registry,
                          Diagnostics& diags) {
  ValidationResult result;
  result.instances.resize(model.blocks.size());
  result.layouts.resize(model.blocks.size());

  bool declared = true;
  for (std::size_t i = 0; i < model.blocks.size(); ++i) {
    const BlockDescriptor& block = model.blocks[i];
    result.instances[i] =
        registry.instantiate(block.libraryName, block.classLabel, diags);
    if (!result.instances[i]) {
      declared = false;
      continue;
    }
    if (!declarePorts(*result.instances[i], block, model.configuration,
                      model.stepSize, result.layouts[i], diags)) {
      declared = false;
    }
  }
  if (!declared) return result;

  Diagnostics wireDiags;
  result.wires = buildWires(model, result.layouts, wireDiags);
  const bool wiresOk = wireDiags.ok();
  diags.append(wireDiags);
  if (!wiresOk) return result;

  std::vector<std::string> names;
  names.reserve(model.blocks.size());
  for (const BlockDescriptor& block : model.blocks) {
    names.push_back(block.instanceName);
  }
  if (!resolveWidths(names, result.layouts, result.wires, diags)) {
    return result;
  }

  result.schedule = computeSchedule(names, result.layouts, result.wires, diags);
  return result;
}

}  // namespace blockflow::graph
