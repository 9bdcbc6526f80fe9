#include "blockflow/core/signal.hpp"

#include <stdexcept>

namespace blockflow {

std::size_t dataTypeSize(DataType dtype) {
  switch (dtype) {
    case DataType::Float64:
      return sizeof(double);
    case DataType::Int32:
      return sizeof(std::int32_t);
    case DataType::Bool:
      return sizeof(std::uint8_t);
  }
  return 0;
}

std::string_view dataTypeName(DataType dtype) {
  switch (dtype) {
    case DataType::Float64:
      return "float64";
    case DataType::Int32:
      return "int32";
    case DataType::Bool:
      return "bool";
  }
  return "?";
}

namespace {
[[noreturn]] void badAccess(DataType have, DataType want) {
  throw std::logic_error("signal holds " + std::string(dataTypeName(have)) +
                         ", accessed as " + std::string(dataTypeName(want)));
}
}  // namespace

std::span<const double> SignalReadView::f64() const {
  if (dtype_ != DataType::Float64) badAccess(dtype_, DataType::Float64);
  return {static_cast<const double*>(data_), static_cast<std::size_t>(width_)};
}

std::span<const std::int32_t> SignalReadView::i32() const {
  if (dtype_ != DataType::Int32) badAccess(dtype_, DataType::Int32);
  return {static_cast<const std::int32_t*>(data_),
          static_cast<std::size_t>(width_)};
}

std::span<const std::uint8_t> SignalReadView::boolean() const {
  if (dtype_ != DataType::Bool) badAccess(dtype_, DataType::Bool);
  return {static_cast<const std::uint8_t*>(data_),
          static_cast<std::size_t>(width_)};
}

std::span<double> SignalView::f64() const {
  if (dtype_ != DataType::Float64) badAccess(dtype_, DataType::Float64);
  return {static_cast<double*>(data_), static_cast<std::size_t>(width_)};
}

std::span<std::int32_t> SignalView::i32() const {
  if (dtype_ != DataType::Int32) badAccess(dtype_, DataType::Int32);
  return {static_cast<std::int32_t*>(data_), static_cast<std::size_t>(width_)};
}

std::span<std::uint8_t> SignalView::boolean() const {
  if (dtype_ != DataType::Bool) badAccess(dtype_, DataType::Bool);
  return {static_cast<std::uint8_t*>(data_), static_cast<std::size_t>(width_)};
}

Signal::Signal(DataType dtype, int width)
    : dtype_(dtype), width_(width) {
  if (width <= 0) throw std::logic_error("signal width must be positive");
  bytes_.assign(static_cast<std::size_t>(width) * dataTypeSize(dtype),
                std::byte{0});
}

}  // namespace blockflow
