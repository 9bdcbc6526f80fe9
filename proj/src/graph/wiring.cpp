#include "blockflow/graph/wiring.hpp"

#include <sstream>
#include <string>

namespace blockflow::graph {
namespace {

std::string portName(std::span<const std::string> names, int block, int port,
                     PortDirection direction) {
  std::ostringstream out;
  out << "'" << names[static_cast<std::size_t>(block)] << "." << port << "' ("
      << (direction == PortDirection::Input ? "input" : "output") << ")";
  return out.str();
}

}  // namespace

std::vector<Wire> buildWires(const GraphModel& model,
                             std::span<const PortLayout> layouts,
                             Diagnostics& diags) {
  std::vector<Wire> wires;
  for (const Connection& conn : model.connections) {
    Wire wire;
    wire.fromBlock = model.blockIndex(conn.fromBlock);
    wire.toBlock = model.blockIndex(conn.toBlock);
    wire.fromPort = conn.fromPort;
    wire.toPort = conn.toPort;
    if (wire.fromBlock < 0 || wire.toBlock < 0) continue;  // reported at load

    const PortLayout& from = layouts[static_cast<std::size_t>(wire.fromBlock)];
    const PortLayout& to = layouts[static_cast<std::size_t>(wire.toBlock)];
    bool ok = true;
    if (wire.fromPort < 0 ||
        wire.fromPort >= static_cast<int>(from.outputs.size())) {
      diags.error(DiagCategory::Model, "graph.bad_port",
                  "connection source '" + conn.fromBlock + "." +
                      std::to_string(conn.fromPort) + "' is out of range; '" +
                      conn.fromBlock + "' declares " +
                      std::to_string(from.outputs.size()) + " output(s)",
                  conn.fromBlock);
      ok = false;
    }
    if (wire.toPort < 0 || wire.toPort >= static_cast<int>(to.inputs.size())) {
      diags.error(DiagCategory::Model, "graph.bad_port",
                  "connection target '" + conn.toBlock + "." +
                      std::to_string(conn.toPort) + "' is out of range; '" +
                      conn.toBlock + "' declares " +
                      std::to_string(to.inputs.size()) + " input(s)",
                  conn.toBlock);
      ok = false;
    }
    if (ok) wires.push_back(wire);
  }
  return wires;
}

bool resolveWidths(std::span<const std::string> names,
                   std::span<PortLayout> layouts, std::span<const Wire> wires,
                   Diagnostics& diags) {
  bool ok = true;

  auto inputWidth = [&](const Wire& w) -> int& {
    return layouts[static_cast<std::size_t>(w.toBlock)]
        .inputs[static_cast<std::size_t>(w.toPort)]
        .width;
  };
  auto outputWidth = [&](const Wire& w) -> int& {
    return layouts[static_cast<std::size_t>(w.fromBlock)]
        .outputs[static_cast<std::size_t>(w.fromPort)]
        .width;
  };

  // Which ports were declared Dynamic; only these participate in the
  // intra-block unification rule.
  std::vector<std::vector<bool>> dynamicIn(layouts.size());
  std::vector<std::vector<bool>> dynamicOut(layouts.size());
  for (std::size_t b = 0; b < layouts.size(); ++b) {
    for (const PortSpec& spec : layouts[b].inputs) {
      dynamicIn[b].push_back(spec.hasDynamicWidth());
    }
    for (const PortSpec& spec : layouts[b].outputs) {
      dynamicOut[b].push_back(spec.hasDynamicWidth());
    }
  }

  bool changed = true;
  while (changed && ok) {
    changed = false;

    for (const Wire& wire : wires) {
      int& from = outputWidth(wire);
      int& to = inputWidth(wire);
      if (from == kDynamicWidth && to != kDynamicWidth) {
        from = to;
        changed = true;
      } else if (to == kDynamicWidth && from != kDynamicWidth) {
        to = from;
        changed = true;
      } else if (from != kDynamicWidth && to != kDynamicWidth && from != to) {
        diags.error(
            DiagCategory::Model, "graph.width_mismatch",
            "width mismatch: " +
                portName(names, wire.fromBlock, wire.fromPort,
                         PortDirection::Output) +
                " is " + std::to_string(from) + " but " +
                portName(names, wire.toBlock, wire.toPort,
                         PortDirection::Input) +
                " is " + std::to_string(to));
        ok = false;
      }
    }

    for (std::size_t b = 0; b < layouts.size() && ok; ++b) {
      int width = kDynamicWidth;
      auto visit = [&](PortSpec& spec, bool wasDynamic) {
        if (!wasDynamic || spec.width == kDynamicWidth) return;
        if (width == kDynamicWidth) {
          width = spec.width;
        } else if (width != spec.width) {
          diags.error(DiagCategory::Model, "graph.width_mismatch",
                      "block '" + names[b] +
                          "': dynamically sized ports resolve to conflicting "
                          "widths " +
                          std::to_string(width) + " and " +
                          std::to_string(spec.width),
                      names[b]);
          ok = false;
        }
      };
      for (std::size_t i = 0; i < layouts[b].inputs.size(); ++i) {
        visit(layouts[b].inputs[i], dynamicIn[b][i]);
      }
      for (std::size_t i = 0; i < layouts[b].outputs.size(); ++i) {
        visit(layouts[b].outputs[i], dynamicOut[b][i]);
      }
      if (!ok || width == kDynamicWidth) continue;
      auto assign = [&](PortSpec& spec, bool wasDynamic) {
        if (wasDynamic && spec.width == kDynamicWidth) {
          spec.width = width;
          changed = true;
        }
      };
      for (std::size_t i = 0; i < layouts[b].inputs.size(); ++i) {
        assign(layouts[b].inputs[i], dynamicIn[b][i]);
      }
      for (std::size_t i = 0; i < layouts[b].outputs.size(); ++i) {
        assign(layouts[b].outputs[i], dynamicOut[b][i]);
      }
    }
  }
  if (!ok) return false;

  // dtype agreement across wires (widths already agree at the fixpoint).
  for (const Wire& wire : wires) {
    const PortSpec& from = layouts[static_cast<std::size_t>(wire.fromBlock)]
                               .outputs[static_cast<std::size_t>(wire.fromPort)];
    const PortSpec& to = layouts[static_cast<std::size_t>(wire.toBlock)]
                             .inputs[static_cast<std::size_t>(wire.toPort)];
    if (from.dtype != to.dtype) {
      diags.error(DiagCategory::Model, "graph.dtype_mismatch",
                  "type mismatch: " +
                      portName(names, wire.fromBlock, wire.fromPort,
                               PortDirection::Output) +
                      " carries " + std::string(dataTypeName(from.dtype)) +
                      " but " +
                      portName(names, wire.toBlock, wire.toPort,
                               PortDirection::Input) +
                      " expects " + std::string(dataTypeName(to.dtype)));
      ok = false;
    }
  }

  // Every input must be driven; no Dynamic width may survive.
  std::vector<std::vector<bool>> driven(layouts.size());
  for (std::size_t b = 0; b < layouts.size(); ++b) {
    driven[b].assign(layouts[b].inputs.size(), false);
  }
  for (const Wire& wire : wires) {
    driven[static_cast<std::size_t>(wire.toBlock)]
          [static_cast<std::size_t>(wire.toPort)] = true;
  }
  for (std::size_t b = 0; b < layouts.size(); ++b) {
    for (std::size_t i = 0; i < layouts[b].inputs.size(); ++i) {
      if (!driven[b][i]) {
        diags.error(DiagCategory::Model, "graph.unconnected_input",
                    "input '" + names[b] + "." + std::to_string(i) +
                        "' is not connected",
                    names[b]);
        ok = false;
      }
    }
    auto checkWidth = [&](const PortSpec& spec, const char* kind,
                          bool connected) {
      if (spec.width == kDynamicWidth) {
        if (!connected) return;  // already reported as unconnected
        diags.error(DiagCategory::Model, "graph.unresolved_width",
                    std::string(kind) + " '" + names[b] + "." +
                        std::to_string(spec.index) +
                        "' has no connection fixing its width",
                    names[b]);
        ok = false;
      } else if (spec.width <= 0) {
        diags.error(DiagCategory::Model, "graph.bad_width",
                    std::string(kind) + " '" + names[b] + "." +
                        std::to_string(spec.index) +
                        "' declares invalid width " +
                        std::to_string(spec.width),
                    names[b]);
        ok = false;
      }
    };
    for (std::size_t i = 0; i < layouts[b].inputs.size(); ++i) {
      checkWidth(layouts[b].inputs[i], "input", driven[b][i]);
    }
    for (const PortSpec& spec : layouts[b].outputs) {
      checkWidth(spec, "output", true);
    }
  }
  return ok;
}

}  // namespace blockflow::graph
