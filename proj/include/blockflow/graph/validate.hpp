#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockflow/core/block.hpp"
#include "blockflow/core/diagnostics.hpp"
#include "blockflow/graph/model.hpp"
#include "blockflow/graph/schedule.hpp"
#include "blockflow/graph/wiring.hpp"
#include "blockflow/plugin/registry.hpp"

namespace blockflow::graph {

/// BlockContext for the declarePorts stage: parameters, configuration, and
/// step size are served; ports and signals do not exist yet, so querying
/// them is a block bug and throws.
class DeclareContext : public BlockContext {
 public:
  DeclareContext(const BlockDescriptor& block,
                 std::span<const Parameter> configuration, double stepSize)
      : block_(block), configuration_(configuration), stepSize_(stepSize) {}

  const Parameter* findParameter(std::string_view name) const override {
    return block_.findParameter(name);
  }
  const Parameter* findConfiguration(std::string_view name) const override {
    for (const Parameter& param : configuration_) {
      if (param.name == name) return &param;
    }
    return nullptr;
  }
  int inputCount() const override { return fail(); }
  int outputCount() const override { return fail(); }
  PortSpec inputSpec(int) const override { return fail<PortSpec>(); }
  PortSpec outputSpec(int) const override { return fail<PortSpec>(); }
  SignalReadView input(int) const override { return fail<SignalReadView>(); }
  SignalView output(int) override { return fail<SignalView>(); }
  double stepSize() const override { return stepSize_; }
  double simTime() const override { return 0.0; }

 private:
  template <typename T = int>
  static T fail() {
    throw std::logic_error("ports are not available during declarePorts");
  }

  const BlockDescriptor& block_;
  std::span<const Parameter> configuration_;
  double stepSize_;
};

/// Calls declarePorts on one instance, guarding against thrown exceptions,
/// and checks the declared layout's basic sanity (contiguous indices are
/// guaranteed by construction; widths must be positive or Dynamic).
/// On failure emits a diagnostic naming the instance and returns false.
bool declarePorts(Block& instance, const BlockDescriptor& descriptor,
                  std::span<const Parameter> configuration, double stepSize,
                  PortLayout& layout, Diagnostics& diags);

/// Everything validate learns about a model, reusable by callers that go on
/// to build an engine or a bundle. Fields are populated as far as the
/// pipeline got before the first failing phase.
struct ValidationResult {
  std::vector<std::unique_ptr<Block>> instances;  // parallel to model.blocks
  std::vector<PortLayout> layouts;                // parallel to model.blocks
  std::vector<Wire> wires;
  std::optional<Schedule> schedule;

  bool complete() const { return schedule.has_value(); }
};

/// The full static pipeline: instantiate every block via the registry, run
/// declarePorts, resolve wires and widths, compute the schedule. All
/// diagnostics aggregate into `diags`; the pipeline presses on past
/// per-block failures so one run reports independent faults together.
ValidationResult validate(const GraphModel& model,
                          plugin::PluginRegistry& registry,
                          Diagnostics& diags);

}  // namespace blockflow::graph
