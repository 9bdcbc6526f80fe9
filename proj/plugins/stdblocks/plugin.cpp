#include <array>

#include "blockflow/plugin/export.hpp"
#include "stdblocks.hpp"

namespace {

constexpr std::array kEntries{
    blockflow::plugin::BlockEntry{"Constant", stdblocks::makeConstant},
    blockflow::plugin::BlockEntry{"CsvSink", stdblocks::makeCsvSink},
    blockflow::plugin::BlockEntry{"DiscreteFilter",
                                  stdblocks::makeDiscreteFilter},
    blockflow::plugin::BlockEntry{"Gain", stdblocks::makeGain},
    blockflow::plugin::BlockEntry{"PID", stdblocks::makePid},
    blockflow::plugin::BlockEntry{"Pendulum", stdblocks::makePendulum},
    blockflow::plugin::BlockEntry{"Saturation", stdblocks::makeSaturation},
    blockflow::plugin::BlockEntry{"SineSource", stdblocks::makeSineSource},
    blockflow::plugin::BlockEntry{"StepSource", stdblocks::makeStepSource},
    blockflow::plugin::BlockEntry{"Sum", stdblocks::makeSum},
    blockflow::plugin::BlockEntry{"UnitDelay", stdblocks::makeUnitDelay},
};

}  // namespace

extern "C" const bf_manifest* blockflow_plugin_manifest(void) {
  return blockflow::plugin::exportManifest(kEntries);
}

extern "C" bf_block* blockflow_create(const char* label) {
  return blockflow::plugin::exportCreate(kEntries, label);
}
