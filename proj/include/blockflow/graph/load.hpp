#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "blockflow/core/diagnostics.hpp"
#include "blockflow/graph/model.hpp"

namespace blockflow::graph {

/// Parses and structurally validates a graph document.
///
/// Expected JSON shape:
///   {
///     "step_size": 0.001,
///     "configuration": { ... },                  // optional
///     "blocks": [
///       {"name": "...", "library": "...", "label": "...",
///        "parameters": { ... }}                  // parameters optional
///     ],
///     "connections": [
///       {"from": "block.port_index", "to": "block.port_index"}
///     ]
///   }
///
/// Checks performed here: JSON well-formedness (errors carry line/column),
/// required keys and types, stepSize > 0, unique instance names, connection
/// endpoints referencing declared blocks, at most one driver per input.
/// Port-range and width checks need declared ports and happen later.
///
/// `originName` labels the document in messages (a file path, or a tag like
/// "<string>" for in-memory documents).
std::optional<GraphModel> parseGraph(std::string_view text,
                                     std::string_view originName,
                                     Diagnostics& diags);

/// Reads the file and delegates to parseGraph.
std::optional<GraphModel> loadGraph(const std::filesystem::path& path,
                                    Diagnostics& diags);

}  // namespace blockflow::graph
