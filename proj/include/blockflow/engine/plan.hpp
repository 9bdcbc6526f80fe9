#pragma once

#include <vector>

#include "blockflow/graph/model.hpp"
#include "blockflow/graph/schedule.hpp"
#include "blockflow/graph/wiring.hpp"

namespace blockflow::engine {

/// Everything an engine needs to execute, with the schedule already applied:
/// blocks are stored in execution order and wires index into that order.
/// The interpreter derives a plan from a validated model; the generated
/// program reconstitutes one from its baked tables plus config.json. Both
/// paths then share every line of execution code, which is what makes their
/// logs byte-identical.
struct ExecutionPlan {
  double stepSize = 0.0;
  std::vector<Parameter> configuration;
  std::vector<graph::BlockDescriptor> blocks;  // execution order
  std::vector<graph::Wire> wires;              // indices into blocks
};

/// Reorders a validated model into plan form. `wires` must be indexed
/// against model.blocks (as produced by buildWires).
ExecutionPlan makePlan(const graph::GraphModel& model,
                       const graph::Schedule& schedule,
                       std::span<const graph::Wire> wires);

}  // namespace blockflow::engine
