#pragma once

#include <memory>

#include "blockflow/core/block.hpp"

// Factories for the blocks this library ships. Each returns a fresh,
// independent instance.
namespace stdblocks {

std::unique_ptr<blockflow::Block> makeConstant();
std::unique_ptr<blockflow::Block> makeSineSource();
std::unique_ptr<blockflow::Block> makeStepSource();
std::unique_ptr<blockflow::Block> makeGain();
std::unique_ptr<blockflow::Block> makeSum();
std::unique_ptr<blockflow::Block> makeSaturation();
std::unique_ptr<blockflow::Block> makeUnitDelay();
std::unique_ptr<blockflow::Block> makeDiscreteFilter();
std::unique_ptr<blockflow::Block> makePid();
std::unique_ptr<blockflow::Block> makePendulum();
std::unique_ptr<blockflow::Block> makeCsvSink();

}  // namespace stdblocks
