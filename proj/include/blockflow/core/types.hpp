#pragma once

/**
 * @file types.hpp
 * @brief Port and data-type vocabulary shared by blocks, graphs, and engines.
 */

#include <cstddef>
#include <string_view>

namespace blockflow {

/// Element type carried by a signal. The set is closed: every port and
/// signal carries exactly one of these.
enum class DataType { Float64, Int32, Bool };

enum class PortDirection { Input, Output };

/// Width value meaning "inherit from whatever this port is connected to".
/// Dynamic widths must be resolved to a concrete positive width before a
/// schedule can be computed.
inline constexpr int kDynamicWidth = -1;

/// Declared shape of one block input or output port.
///
/// `directFeedthrough` is meaningful for inputs only: it states whether the
/// current-step value of this input influences the current-step output. It
/// defaults to true; delay-like blocks clear it, which is what lets the
/// scheduler break feedback loops. Engines present a non-feedthrough input
/// with the producer's previous-step value (zeros at step 0), independent of
/// where producer and consumer land in the schedule.
struct PortSpec {
  int index = 0;
  int width = kDynamicWidth;
  DataType dtype = DataType::Float64;
  PortDirection direction = PortDirection::Input;
  bool directFeedthrough = true;

  bool hasDynamicWidth() const { return width == kDynamicWidth; }
};

std::size_t dataTypeSize(DataType dtype);
std::string_view dataTypeName(DataType dtype);

}  // namespace blockflow
