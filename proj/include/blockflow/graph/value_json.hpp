#pragma once

#include <nlohmann/json.hpp>

#include "blockflow/core/parameter.hpp"

namespace blockflow::graph {

/// JSON <-> ParameterValue mapping shared by the graph loader and the
/// generated-bundle config reader/writer, so a value round-trips identically
/// through both paths.
///
/// Supported JSON shapes: number (float or integer), bool, string, array of
/// numbers. Returns false for anything else.
bool valueFromJson(const nlohmann::json& value, ParameterValue& out);

nlohmann::json valueToJson(const ParameterValue& value);

}  // namespace blockflow::graph
