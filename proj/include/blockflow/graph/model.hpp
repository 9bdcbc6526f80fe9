#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockflow/core/parameter.hpp"

namespace blockflow::graph {

/// One block instance in the model: which factory creates it and how it is
/// parameterized. (libraryName, classLabel) identifies the factory entry;
/// instanceName is unique within the model.
struct BlockDescriptor {
  std::string instanceName;
  std::string libraryName;
  std::string classLabel;
  std::vector<Parameter> parameters;  // sorted by name

  const Parameter* findParameter(std::string_view name) const;
};

/// Directed port-to-port edge. An output may fan out to many inputs; each
/// input accepts at most one incoming connection.
struct Connection {
  std::string fromBlock;
  int fromPort = 0;
  std::string toBlock;
  int toPort = 0;
};

/// The controller as data: block instances, connections, fixed step size,
/// and model-level configuration. Immutable after loading.
struct GraphModel {
  double stepSize = 0.0;
  std::vector<Parameter> configuration;  // sorted by name
  std::vector<BlockDescriptor> blocks;
  std::vector<Connection> connections;

  /// Index into blocks by instance name, or -1.
  int blockIndex(std::string_view name) const;
};

}  // namespace blockflow::graph
