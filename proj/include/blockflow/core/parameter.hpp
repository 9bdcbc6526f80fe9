#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace blockflow {

/// The five supported parameter value kinds. No nested structures.
using ParameterValue =
    std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

enum class ParameterKind { Scalar, Integer, Boolean, String, Vector };

/// A named configuration value attached to a block instance (or, for
/// model-level configuration, to the whole graph). Names are unique within
/// one owner.
struct Parameter {
  std::string name;
  ParameterValue value;

  ParameterKind kind() const {
    return static_cast<ParameterKind>(value.index());
  }
};

std::string_view parameterKindName(ParameterKind kind);

/// Compact single-line rendering ("2.5", "true", "abc", "[1, 2]"), used in
/// diagnostics and run reports.
std::string parameterValueText(const ParameterValue& value);

}  // namespace blockflow
