#include "blockflow/graph/schedule.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

namespace blockflow::graph {
namespace {

/// Any directed cycle in the feedthrough graph, as block indices in walk
/// order, rotated to start at the lexicographically smallest name so the
/// report is deterministic.
std::vector<int> findCycle(std::span<const std::string> names,
                           const std::vector<std::set<int>>& edges,
                           const std::vector<bool>& alive) {
  const int n = static_cast<int>(names.size());
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;

  std::vector<int> cycle;
  auto dfs = [&](auto&& self, int node) -> bool {
    state[static_cast<std::size_t>(node)] = 1;
    stack.push_back(node);
    for (int next : edges[static_cast<std::size_t>(node)]) {
      if (!alive[static_cast<std::size_t>(next)]) continue;
      if (state[static_cast<std::size_t>(next)] == 1) {
        auto start = std::find(stack.begin(), stack.end(), next);
        cycle.assign(start, stack.end());
        return true;
      }
      if (state[static_cast<std::size_t>(next)] == 0 && self(self, next)) {
        return true;
      }
    }
    stack.pop_back();
    state[static_cast<std::size_t>(node)] = 2;
    return false;
  };

  for (int node = 0; node < n; ++node) {
    if (alive[static_cast<std::size_t>(node)] &&
        state[static_cast<std::size_t>(node)] == 0) {
      if (dfs(dfs, node)) break;
    }
  }

  if (!cycle.empty()) {
    auto smallest = std::min_element(
        cycle.begin(), cycle.end(), [&](int a, int b) {
          return names[static_cast<std::size_t>(a)] <
                 names[static_cast<std::size_t>(b)];
        });
    std::rotate(cycle.begin(), smallest, cycle.end());
  }
  return cycle;
}

}  // namespace

std::optional<Schedule> computeSchedule(std::span<const std::string> names,
                                        std::span<const PortLayout> layouts,
                                        std::span<const Wire> wires,
                                        Diagnostics& diags) {
  const int n = static_cast<int>(names.size());

  // Dependency edges: producer -> consumer for every wire whose target
  // input has direct feedthrough. Parallel wires collapse to one edge.
  std::vector<std::set<int>> edges(static_cast<std::size_t>(n));
  for (const Wire& wire : wires) {
    const PortSpec& input = layouts[static_cast<std::size_t>(wire.toBlock)]
                                .inputs[static_cast<std::size_t>(wire.toPort)];
    if (!input.directFeedthrough) continue;
    edges[static_cast<std::size_t>(wire.fromBlock)].insert(wire.toBlock);
  }

  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (int from = 0; from < n; ++from) {
    for (int to : edges[static_cast<std::size_t>(from)]) {
      ++indegree[static_cast<std::size_t>(to)];
    }
  }

  // Kahn's algorithm; the ready set is a min-heap on instance name so two
  // loads of the same model (however shuffled) schedule identically.
  auto byName = [&](int a, int b) {
    return names[static_cast<std::size_t>(a)] >
           names[static_cast<std::size_t>(b)];
  };
  std::priority_queue<int, std::vector<int>, decltype(byName)> ready(byName);
  for (int node = 0; node < n; ++node) {
    if (indegree[static_cast<std::size_t>(node)] == 0) ready.push(node);
  }

  Schedule schedule;
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  while (!ready.empty()) {
    const int node = ready.top();
    ready.pop();
    alive[static_cast<std::size_t>(node)] = false;
    schedule.order.push_back(names[static_cast<std::size_t>(node)]);
    for (int next : edges[static_cast<std::size_t>(node)]) {
      if (--indegree[static_cast<std::size_t>(next)] == 0) ready.push(next);
    }
  }

  if (static_cast<int>(schedule.order.size()) != n) {
    const std::vector<int> cycle = findCycle(names, edges, alive);
    std::string message = "algebraic loop: ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      message += names[static_cast<std::size_t>(cycle[i])];
      message += " -> ";
    }
    if (!cycle.empty()) message += names[static_cast<std::size_t>(cycle[0])];
    message +=
        "; every connection in the cycle feeds a direct-feedthrough input "
        "(break it with a UnitDelay)";
    diags.error(DiagCategory::Model, "graph.algebraic_loop", message);
    return std::nullopt;
  }

  // Buffer plan: one entry per output port, consumers sorted.
  for (int b = 0; b < n; ++b) {
    const PortLayout& layout = layouts[static_cast<std::size_t>(b)];
    for (const PortSpec& spec : layout.outputs) {
      BufferPlanEntry entry;
      entry.producer = names[static_cast<std::size_t>(b)];
      entry.port = spec.index;
      entry.dtype = spec.dtype;
      entry.width = spec.width;
      for (const Wire& wire : wires) {
        if (wire.fromBlock == b && wire.fromPort == spec.index) {
          entry.consumers.emplace_back(
              names[static_cast<std::size_t>(wire.toBlock)], wire.toPort);
        }
      }
      std::sort(entry.consumers.begin(), entry.consumers.end());
      schedule.buffers.push_back(std::move(entry));
    }
  }
  std::sort(schedule.buffers.begin(), schedule.buffers.end(),
            [](const BufferPlanEntry& a, const BufferPlanEntry& b) {
              return std::tie(a.producer, a.port) < std::tie(b.producer, b.port);
            });

  return schedule;
}

std::string Schedule::toJson() const {
  nlohmann::json doc;
  doc["order"] = order;
  doc["buffers"] = nlohmann::json::array();
  for (const BufferPlanEntry& entry : buffers) {
    nlohmann::json consumers = nlohmann::json::array();
    for (const auto& [block, port] : entry.consumers) {
      consumers.push_back({{"block", block}, {"port", port}});
    }
    doc["buffers"].push_back({{"producer", entry.producer},
                              {"port", entry.port},
                              {"dtype", std::string(dataTypeName(entry.dtype))},
                              {"width", entry.width},
                              {"consumers", std::move(consumers)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace blockflow::graph
