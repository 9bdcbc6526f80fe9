// A structurally valid plugin claiming a future ABI version. The host must
// refuse it with both versions in the message.
#include "blockflow/plugin/plugin_abi.h"

namespace {
const char* const kLabels[] = {"Relic"};
const bf_manifest kManifest = {99, 1, kLabels};
}  // namespace

extern "C" const bf_manifest* blockflow_plugin_manifest(void) {
  return &kManifest;
}

extern "C" bf_block* blockflow_create(const char*) { return nullptr; }
