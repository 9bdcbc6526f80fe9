#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockflow/core/diagnostics.hpp"
#include "blockflow/core/types.hpp"
#include "blockflow/graph/wiring.hpp"

namespace blockflow::graph {

/// Planned allocation for one output port: the signal every consumer of
/// that port reads. Unconnected outputs keep an entry with no consumers so
/// the engine still has somewhere to put the block's writes.
struct BufferPlanEntry {
  std::string producer;
  int port = 0;
  DataType dtype = DataType::Float64;
  int width = 0;
  std::vector<std::pair<std::string, int>> consumers;  // sorted (block, port)
};

/// Deterministic execution order plus signal-buffer layout. Serializing two
/// schedules of the same model (however its file was shuffled) yields
/// byte-identical text.
struct Schedule {
  std::vector<std::string> order;
  std::vector<BufferPlanEntry> buffers;  // sorted by (producer, port)

  std::string toJson() const;
};

/// Topologically orders the blocks over direct-feedthrough dependencies.
/// A wire into a non-feedthrough input (a UnitDelay-style port) imposes no
/// ordering constraint, which is what makes feedback loops schedulable.
/// Ties are broken by ascending instance name. On an algebraic loop, emits
/// a diagnostic listing the full cycle and returns nothing.
///
/// `names` are display/order names parallel to `layouts`; widths must be
/// resolved.
std::optional<Schedule> computeSchedule(std::span<const std::string> names,
                                        std::span<const PortLayout> layouts,
                                        std::span<const Wire> wires,
                                        Diagnostics& diags);

}  // namespace blockflow::graph
