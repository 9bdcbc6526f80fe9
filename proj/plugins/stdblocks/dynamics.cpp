#include <algorithm>
#include <limits>
#include <vector>

#include "blockflow/core/params.hpp"
#include "stdblocks.hpp"

namespace stdblocks {

using namespace blockflow;

namespace {

/// One-step delay: emits x0 on the first step, afterwards the input as the
/// engine presents it. The input is declared non-feedthrough, so the engine
/// already hands this block the producer's previous-step value; the block
/// itself keeps no sample history.
class UnitDelay : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    x0_ = reader.has("x0") ? reader.scalarOrVector("x0")
                           : std::vector<double>{0.0};
    if (!reader.ok()) return reader.status();
    if (x0_.empty()) {
      return Status::failure("parameter 'x0': must not be empty");
    }
    const int width =
        x0_.size() > 1 ? static_cast<int>(x0_.size()) : kDynamicWidth;
    layout.addInput(width, DataType::Float64, /*directFeedthrough=*/false);
    layout.addOutput(width);
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    auto out = ctx.output(0).f64();
    if (first_) {
      first_ = false;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x0_.size() == 1 ? x0_[0] : x0_[i];
      }
      return Status::success();
    }
    const auto in = ctx.input(0).f64();
    std::copy(in.begin(), in.end(), out.begin());
    return Status::success();
  }

 private:
  std::vector<double> x0_;
  bool first_ = true;
};

/// IIR filter b(z)/a(z) in transposed direct form II, applied independently
/// to every channel of the input. Coefficients are normalized by a[0] and
/// zero-padded to a common order at initialize.
class DiscreteFilter : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    b_ = reader.scalarOrVector("b");
    a_ = reader.scalarOrVector("a");
    if (!reader.ok()) return reader.status();
    if (b_.empty()) return Status::failure("parameter 'b': must not be empty");
    if (a_.empty()) return Status::failure("parameter 'a': must not be empty");
    layout.addInput(kDynamicWidth);
    layout.addOutput(kDynamicWidth);
    return Status::success();
  }

  Status initialize(BlockContext& ctx) override {
    if (a_[0] == 0.0) {
      return Status::failure(
          "parameter 'a': leading coefficient must be non-zero");
    }
    order_ = std::max(a_.size(), b_.size()) - 1;
    bn_.assign(order_ + 1, 0.0);
    an_.assign(order_ + 1, 0.0);
    for (std::size_t i = 0; i < b_.size(); ++i) bn_[i] = b_[i] / a_[0];
    for (std::size_t i = 0; i < a_.size(); ++i) an_[i] = a_[i] / a_[0];
    const auto channels = static_cast<std::size_t>(ctx.inputSpec(0).width);
    state_.assign(channels, std::vector<double>(order_, 0.0));
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const auto in = ctx.input(0).f64();
    auto out = ctx.output(0).f64();
    for (std::size_t ch = 0; ch < in.size(); ++ch) {
      auto& z = state_[ch];
      const double u = in[ch];
      const double y = bn_[0] * u + (order_ > 0 ? z[0] : 0.0);
      for (std::size_t i = 0; i < order_; ++i) {
        z[i] = bn_[i + 1] * u + (i + 1 < order_ ? z[i + 1] : 0.0) -
               an_[i + 1] * y;
      }
      out[ch] = y;
    }
    return Status::success();
  }

 private:
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<double> bn_;
  std::vector<double> an_;
  std::size_t order_ = 0;
  std::vector<std::vector<double>> state_;
};

/// Discrete PID on the error input, elementwise per channel:
///
///     S_k = clamp(S_{k-1} + e_k * dt, windup_min, windup_max)
///     u_k = Kp * e_k + Ki * S_k + Kd * (e_k - e_{k-1}) / dt
///
/// with S_0 accumulating from zero and e_0's backward difference taken
/// against zero. The optional windup bounds clamp the integral state, not
/// the output.
class Pid : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    kp_ = reader.scalarOr("Kp", 0.0);
    ki_ = reader.scalarOr("Ki", 0.0);
    kd_ = reader.scalarOr("Kd", 0.0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    windupMin_ = reader.scalarOr("windup_min", -inf);
    windupMax_ = reader.scalarOr("windup_max", inf);
    if (!reader.ok()) return reader.status();
    layout.addInput(kDynamicWidth);
    layout.addOutput(kDynamicWidth);
    return Status::success();
  }

  Status initialize(BlockContext& ctx) override {
    if (ctx.stepSize() <= 0.0) {
      return Status::failure("step size must be positive");
    }
    if (windupMin_ > windupMax_) {
      return Status::failure(
          "parameter 'windup_min' exceeds 'windup_max'");
    }
    const auto channels = static_cast<std::size_t>(ctx.inputSpec(0).width);
    integral_.assign(channels, 0.0);
    previousError_.assign(channels, 0.0);
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const auto in = ctx.input(0).f64();
    auto out = ctx.output(0).f64();
    const double dt = ctx.stepSize();
    for (std::size_t ch = 0; ch < in.size(); ++ch) {
      const double e = in[ch];
      integral_[ch] =
          std::clamp(integral_[ch] + e * dt, windupMin_, windupMax_);
      out[ch] = kp_ * e + ki_ * integral_[ch] +
                kd_ * (e - previousError_[ch]) / dt;
      previousError_[ch] = e;
    }
    return Status::success();
  }

 private:
  double kp_ = 0.0;
  double ki_ = 0.0;
  double kd_ = 0.0;
  double windupMin_ = 0.0;
  double windupMax_ = 0.0;
  std::vector<double> integral_;
  std::vector<double> previousError_;
};

}  // namespace

std::unique_ptr<Block> makeUnitDelay() { return std::make_unique<UnitDelay>(); }
std::unique_ptr<Block> makeDiscreteFilter() {
  return std::make_unique<DiscreteFilter>();
}
std::unique_ptr<Block> makePid() { return std::make_unique<Pid>(); }

}  // namespace stdblocks
