#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockflow/core/types.hpp"

namespace blockflow {

/// Read-only view over one port's payload for the current step.
class SignalReadView {
 public:
  SignalReadView(DataType dtype, int width, const void* data)
      : dtype_(dtype), width_(width), data_(data) {}

  DataType dtype() const { return dtype_; }
  int width() const { return width_; }
  const void* raw() const { return data_; }

  /// Typed element access; the requested type must match dtype().
  std::span<const double> f64() const;
  std::span<const std::int32_t> i32() const;
  std::span<const std::uint8_t> boolean() const;

 private:
  DataType dtype_;
  int width_;
  const void* data_;
};

/// Writable view over one output port's payload for the current step.
class SignalView {
 public:
  SignalView(DataType dtype, int width, void* data)
      : dtype_(dtype), width_(width), data_(data) {}

  DataType dtype() const { return dtype_; }
  int width() const { return width_; }
  void* raw() const { return data_; }

  std::span<double> f64() const;
  std::span<std::int32_t> i32() const;
  std::span<std::uint8_t> boolean() const;

  SignalReadView read() const { return {dtype_, width_, data_}; }

 private:
  DataType dtype_;
  int width_;
  void* data_;
};

/// A typed, fixed-width buffer carrying data between connected ports for one
/// step. The engine allocates one per output port; all consumers of that
/// port read the same storage, so within a step every reader observes
/// exactly what the producer last wrote.
class Signal {
 public:
  Signal(DataType dtype, int width);

  DataType dtype() const { return dtype_; }
  int width() const { return width_; }

  SignalView view() { return {dtype_, width_, bytes_.data()}; }
  SignalReadView cview() const { return {dtype_, width_, bytes_.data()}; }

 private:
  DataType dtype_;
  int width_;
  std::vector<std::byte> bytes_;  // width * dataTypeSize(dtype), zeroed
};

}  // namespace blockflow
