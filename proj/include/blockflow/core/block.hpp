#pragma once

/**
 * @file block.hpp
 * @brief The two-sided contract between engines and blocks.
 *
 * A Block never sees the engine that drives it, and an engine never sees a
 * block's internals: engines call blocks only through the Block interface,
 * and blocks query engine data only through the BlockContext interface.
 * Everything a block needs — parameters, resolved port shapes, signal
 * payloads, step size, simulation time, model configuration — flows through
 * BlockContext, so the same block runs unchanged under the interpreter, the
 * generated standalone program, or a test harness with a mock context.
 */

#include <vector>

#include "blockflow/core/parameter.hpp"
#include "blockflow/core/signal.hpp"
#include "blockflow/core/status.hpp"
#include "blockflow/core/types.hpp"

namespace blockflow {

/// Port lists a block declares in Block::declarePorts. Dynamic widths are
/// allowed here; they are resolved from the connected signals before
/// initialize runs.
struct PortLayout {
  std::vector<PortSpec> inputs;
  std::vector<PortSpec> outputs;

  /// When set, the engine checks every float64 output of this block for
  /// NaN/Inf after each step and fails the run on the first hit.
  bool finiteOutputs = false;

  PortSpec& addInput(int width, DataType dtype = DataType::Float64,
                     bool directFeedthrough = true) {
    PortSpec spec;
    spec.index = static_cast<int>(inputs.size());
    spec.width = width;
    spec.dtype = dtype;
    spec.direction = PortDirection::Input;
    spec.directFeedthrough = directFeedthrough;
    inputs.push_back(spec);
    return inputs.back();
  }

  PortSpec& addOutput(int width, DataType dtype = DataType::Float64) {
    PortSpec spec;
    spec.index = static_cast<int>(outputs.size());
    spec.width = width;
    spec.dtype = dtype;
    spec.direction = PortDirection::Output;
    spec.directFeedthrough = false;
    outputs.push_back(spec);
    return outputs.back();
  }
};

/// Engine-side information a block may query. This is the only channel
/// through which a block obtains engine data.
///
/// Availability by lifecycle stage:
///  - parameters and model configuration: always;
///  - resolved port specs and counts: from initialize onward;
///  - signal payloads: during output only;
///  - stepSize and simTime: always, and constant within one step callback.
class BlockContext {
 public:
  virtual ~BlockContext() = default;

  /// Parameter of the owning block instance, or nullptr if absent.
  virtual const Parameter* findParameter(std::string_view name) const = 0;

  /// Model-level configuration entry, or nullptr if absent.
  virtual const Parameter* findConfiguration(std::string_view name) const = 0;

  virtual int inputCount() const = 0;
  virtual int outputCount() const = 0;

  /// Resolved port specs. Widths are concrete once initialize has been
  /// reached; out-of-range indices throw std::logic_error (engine bug).
  virtual PortSpec inputSpec(int index) const = 0;
  virtual PortSpec outputSpec(int index) const = 0;

  /// Signal payloads for the current step. Valid during output only.
  virtual SignalReadView input(int index) const = 0;
  virtual SignalView output(int index) = 0;

  /// Fixed step size in seconds, identical for every block and every step.
  virtual double stepSize() const = 0;

  /// Current simulation time in seconds: step index times step size,
  /// computed from the integer index so long runs do not drift.
  virtual double simTime() const = 0;
};

/// Operations a block implementation must provide. The engine calls them in
/// exactly this order per instance:
///
///     declarePorts -> initialize -> output x N -> terminate
///
/// Any other order is an engine bug. Blocks may keep hidden internal state;
/// it must only advance inside output, by exactly one step per call, so that
/// the output sequence is a deterministic function of (parameters, initial
/// state, inputs).
class Block {
 public:
  virtual ~Block() = default;

  /// Declares the complete input and output port lists. Dynamic widths are
  /// permitted. Must not depend on anything but parameters.
  virtual Status declarePorts(BlockContext& ctx, PortLayout& layout) = 0;

  /// Called once after widths are resolved and buffers are allocated.
  virtual Status initialize(BlockContext& ctx) {
    (void)ctx;
    return Status::success();
  }

  /// Computes this step's outputs from the current inputs. Port topology
  /// must not change here.
  virtual Status output(BlockContext& ctx) = 0;

  /// Releases resources. Idempotent; called even when initialize never ran,
  /// in which case it must be a no-op success.
  virtual Status terminate(BlockContext& ctx) {
    (void)ctx;
    return Status::success();
  }
};

}  // namespace blockflow
