#include "blockflow/graph/model.hpp"

namespace blockflow::graph {

const Parameter* BlockDescriptor::findParameter(std::string_view name) const {
  for (const Parameter& param : parameters) {
    if (param.name == name) return &param;
  }
  return nullptr;
}

int GraphModel::blockIndex(std::string_view name) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].instanceName == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace blockflow::graph
