#include "blockflow/engine/plan.hpp"

#include <algorithm>
#include <tuple>

namespace blockflow::engine {

ExecutionPlan makePlan(const graph::GraphModel& model,
                       const graph::Schedule& schedule,
                       std::span<const graph::Wire> wires) {
  ExecutionPlan plan;
  plan.stepSize = model.stepSize;
  plan.configuration = model.configuration;

  // model index -> plan (execution) index
  std::vector<int> position(model.blocks.size(), -1);
  plan.blocks.reserve(schedule.order.size());
  for (const std::string& name : schedule.order) {
    const int index = model.blockIndex(name);
    position[static_cast<std::size_t>(index)] =
        static_cast<int>(plan.blocks.size());
    plan.blocks.push_back(model.blocks[static_cast<std::size_t>(index)]);
  }

  plan.wires.reserve(wires.size());
  for (const graph::Wire& wire : wires) {
    graph::Wire mapped = wire;
    mapped.fromBlock = position[static_cast<std::size_t>(wire.fromBlock)];
    mapped.toBlock = position[static_cast<std::size_t>(wire.toBlock)];
    plan.wires.push_back(mapped);
  }
  // Canonical order: every input has exactly one driver, so (toBlock, toPort)
  // is a strict total order. Plans for the same model are then independent of
  // the connection order in the source document.
  std::sort(plan.wires.begin(), plan.wires.end(),
            [](const graph::Wire& a, const graph::Wire& b) {
              return std::tie(a.toBlock, a.toPort) < std::tie(b.toBlock, b.toPort);
            });
  return plan;
}

}  // namespace blockflow::engine
