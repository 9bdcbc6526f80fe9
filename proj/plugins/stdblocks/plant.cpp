#include <cmath>

#include "blockflow/core/params.hpp"
#include "stdblocks.hpp"

namespace stdblocks {

using namespace blockflow;

namespace {

/// Torque-driven pendulum, theta = 0 at the stable hanging equilibrium.
/// Integrated with semi-implicit Euler (velocity first, then position),
/// which keeps the undamped oscillator's energy bounded where explicit
/// Euler spirals outward. State advances only inside output; port 0 is the
/// updated angle, port 1 the updated angular velocity.
class Pendulum : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    m_ = reader.scalarOr("m", 1.0);
    l_ = reader.scalarOr("l", 1.0);
    c_ = reader.scalarOr("c", 0.0);
    g_ = reader.scalarOr("g", 9.81);
    theta_ = reader.scalarOr("theta0", 0.0);
    omega_ = reader.scalarOr("omega0", 0.0);
    if (!reader.ok()) return reader.status();
    layout.addInput(1);
    layout.addOutput(1);
    layout.addOutput(1);
    layout.finiteOutputs = true;
    return Status::success();
  }

  Status initialize(BlockContext&) override {
    if (m_ <= 0.0) return Status::failure("parameter 'm': must be positive");
    if (l_ <= 0.0) return Status::failure("parameter 'l': must be positive");
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    const double torque = ctx.input(0).f64()[0];
    const double dt = ctx.stepSize();
    omega_ += dt * (torque - m_ * g_ * l_ * std::sin(theta_) - c_ * omega_) /
              (m_ * l_ * l_);
    theta_ += dt * omega_;
    ctx.output(0).f64()[0] = theta_;
    ctx.output(1).f64()[0] = omega_;
    return Status::success();
  }

 private:
  double m_ = 1.0;
  double l_ = 1.0;
  double c_ = 0.0;
  double g_ = 9.81;
  double theta_ = 0.0;
  double omega_ = 0.0;
};

}  // namespace

std::unique_ptr<Block> makePendulum() { return std::make_unique<Pendulum>(); }

}  // namespace stdblocks
