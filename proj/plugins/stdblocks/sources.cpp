#include <cmath>
#include <numbers>
#include <vector>

#include "blockflow/core/params.hpp"
#include "stdblocks.hpp"

namespace stdblocks {

using namespace blockflow;

namespace {

/// Emits its `value` parameter (scalar or vector) every step.
class Constant : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    values_ = reader.scalarOrVector("value");
    if (!reader.ok()) return reader.status();
    if (values_.empty()) {
      return Status::failure("parameter 'value': must not be empty");
    }
    layout.addOutput(static_cast<int>(values_.size()));
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    auto out = ctx.output(0).f64();
    std::copy(values_.begin(), values_.end(), out.begin());
    return Status::success();
  }

 private:
  std::vector<double> values_;
};

/// offset + amplitude * sin(2*pi*frequency*t + phase), one sample per step.
class SineSource : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    amplitude_ = reader.scalarOr("amplitude", 1.0);
    frequency_ = reader.scalarOr("frequency", 1.0);
    phase_ = reader.scalarOr("phase", 0.0);
    offset_ = reader.scalarOr("offset", 0.0);
    if (!reader.ok()) return reader.status();
    layout.addOutput(1);
    return Status::success();
  }

  Status initialize(BlockContext&) override {
    if (frequency_ < 0.0) {
      return Status::failure("parameter 'frequency': must be non-negative");
    }
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const double t = ctx.simTime();
    ctx.output(0).f64()[0] =
        offset_ +
        amplitude_ * std::sin(2.0 * std::numbers::pi * frequency_ * t + phase_);
    return Status::success();
  }

 private:
  double amplitude_ = 1.0;
  double frequency_ = 1.0;
  double phase_ = 0.0;
  double offset_ = 0.0;
};

/// 0 before stepTime, `value` at and after it.
class StepSource : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    value_ = reader.scalarOr("value", 1.0);
    stepTime_ = reader.scalarOr("stepTime", 0.0);
    if (!reader.ok()) return reader.status();
    layout.addOutput(1);
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    ctx.output(0).f64()[0] = ctx.simTime() >= stepTime_ ? value_ : 0.0;
    return Status::success();
  }

 private:
  double value_ = 1.0;
  double stepTime_ = 0.0;
};

}  // namespace

std::unique_ptr<Block> makeConstant() { return std::make_unique<Constant>(); }
std::unique_ptr<Block> makeSineSource() {
  return std::make_unique<SineSource>();
}
std::unique_ptr<Block> makeStepSource() {
  return std::make_unique<StepSource>();
}

}  // namespace stdblocks
