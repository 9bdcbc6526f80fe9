#include <string>

#include "blockflow/core/params.hpp"
#include "blockflow/util/csv.hpp"
#include "stdblocks.hpp"

namespace stdblocks {

using namespace blockflow;

namespace {

/// Streams its input to a CSV file, one row per step prefixed with the
/// simulation time. The file is created at initialize (after the input
/// width is known) and finalized at terminate.
class CsvSink : public Block {
 public:
  Status declarePorts(BlockContext& ctx, PortLayout& layout) override {
    ParamReader reader(ctx);
    path_ = reader.text("path");
    if (!reader.ok()) return reader.status();
    if (path_.empty()) {
      return Status::failure("parameter 'path': must not be empty");
    }
    layout.addInput(kDynamicWidth);
    return Status::success();
  }

  Status initialize(BlockContext& ctx) override {
    if (!writer_.open(path_, ctx.inputSpec(0).width)) {
      return Status::failure("cannot create '" + path_ + "'");
    }
    return Status::success();
  }

  Status output(BlockContext& ctx) override {
    writer_.writeRow(ctx.simTime(), ctx.input(0).f64());
    return Status::success();
  }

  Status terminate(BlockContext&) override {
    if (!writer_.isOpen()) return Status::success();
    if (!writer_.close()) {
      return Status::failure("cannot finalize '" + path_ + "'");
    }
    return Status::success();
  }

 private:
  std::string path_;
  util::CsvWriter writer_;
};

}  // namespace

std::unique_ptr<Block> makeCsvSink() { return std::make_unique<CsvSink>(); }

}  // namespace stdblocks
