#include <algorithm>
#include <string>
#include <vector>

#include "blockflow/core/params.hpp"
#include "stdblocks.hpp"

namespace stdblocks {

using namespace blockflow;

namespace {

/// Elementwise k*u. A scalar k applies to any width; a vector k of length
/// L > 1 forces the port width to L.
class Gain : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    k_ = reader.scalarOrVector("k");
    if (!reader.ok()) return reader.status();
    if (k_.empty()) return Status::failure("parameter 'k': must not be empty");
    const int width =
        k_.size() > 1 ? static_cast<int>(k_.size()) : kDynamicWidth;
    layout.addInput(width);
    layout.addOutput(width);
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const auto in = ctx.input(0).f64();
    auto out = ctx.output(0).f64();
    for (std::size_t i = 0; i < in.size(); ++i) {
      out[i] = (k_.size() == 1 ? k_[0] : k_[i]) * in[i];
    }
    return Status::success();
  }

 private:
  std::vector<double> k_;
};

/// Signed elementwise sum over N inputs; the `signs` string ("+-+") fixes N
/// and the sign applied to each input.
class Sum : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    const std::string signs = reader.text("signs");
    if (!reader.ok()) return reader.status();
    if (signs.empty()) {
      return Status::failure("parameter 'signs': must not be empty");
    }
    for (char c : signs) {
      if (c != '+' && c != '-') {
        return Status::failure(
            "parameter 'signs': only '+' and '-' are allowed, found '" +
            std::string(1, c) + "'");
      }
      signs_.push_back(c == '+' ? 1.0 : -1.0);
    }
    for (std::size_t i = 0; i < signs_.size(); ++i) {
      layout.addInput(kDynamicWidth);
    }
    layout.addOutput(kDynamicWidth);
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    auto out = ctx.output(0).f64();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t port = 0; port < signs_.size(); ++port) {
      const auto in = ctx.input(static_cast<int>(port)).f64();
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += signs_[port] * in[i];
      }
    }
    return Status::success();
  }

 private:
  std::vector<double> signs_;
};

/// Elementwise clamp to [lo, hi].
class Saturation : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    lo_ = reader.scalar("lo");
    hi_ = reader.scalar("hi");
    if (!reader.ok()) return reader.status();
    layout.addInput(kDynamicWidth);
    layout.addOutput(kDynamicWidth);
    return Status::success();
  }

  Status initialize(BlockContext&) override {
    if (lo_ > hi_) {
      return Status::failure("parameter 'lo' (" + std::to_string(lo_) +
                             ") exceeds 'hi' (" + std::to_string(hi_) + ")");
    }
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const auto in = ctx.input(0).f64();
    auto out = ctx.output(0).f64();
    for (std::size_t i = 0; i < in.size(); ++i) {
      out[i] = std::clamp(in[i], lo_, hi_);
    }
    return Status::success();
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace

std::unique_ptr<Block> makeGain() { return std::make_unique<Gain>(); }
std::unique_ptr<Block> makeSum() { return std::make_unique<Sum>(); }
std::unique_ptr<Block> makeSaturation() {
  return std::make_unique<Saturation>();
}

}  // namespace stdblocks
