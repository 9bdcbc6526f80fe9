#pragma once

#include <span>
#include <string>
#include <vector>

#include "blockflow/core/block.hpp"
#include "blockflow/core/diagnostics.hpp"
#include "blockflow/graph/model.hpp"

namespace blockflow::graph {

/// A connection with both endpoints resolved to block indices. Valid against
/// one particular block ordering.
struct Wire {
  int fromBlock = -1;
  int fromPort = 0;
  int toBlock = -1;
  int toPort = 0;
};

/// Resolves the model's name-based connections to index-based wires and
/// checks every port ordinal against the declared layouts. Emits one
/// diagnostic per faulty connection and drops it from the result.
std::vector<Wire> buildWires(const GraphModel& model,
                             std::span<const PortLayout> layouts,
                             Diagnostics& diags);

/// Resolves all Dynamic widths in place and checks agreement.
///
/// Two propagation rules run to a fixpoint:
///  - across a wire, both endpoints carry the same width;
///  - within a block, all ports declared Dynamic share one width (how a
///    Sum's output follows its inputs without an explicit rule per block).
///
/// Afterwards: concrete endpoints of every wire must match in width and
/// dtype; no Dynamic port may remain; every input port must be driven.
/// `names` gives block display names, parallel to `layouts`.
/// Returns false when any diagnostic was emitted.
bool resolveWidths(std::span<const std::string> names,
                   std::span<PortLayout> layouts, std::span<const Wire> wires,
                   Diagnostics& diags);

}  // namespace blockflow::graph
