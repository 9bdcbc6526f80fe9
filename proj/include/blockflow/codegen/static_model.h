#pragma once

#include <cstddef>

namespace blockflow::codegen {

/// Baked controller topology, as emitted into a generated bundle's schedule
/// table source. Blocks appear in execution order; wires index into that
/// order. Parameter values are deliberately absent: they live in the
/// bundle's config.json so gains can change without regenerating sources.
struct StaticBlockRow {
  const char* name;
  const char* library;
  const char* label;
};

struct StaticWireRow {
  int fromBlock;
  int fromPort;
  int toBlock;
  int toPort;
};

struct StaticModel {
  double stepSize;
  const StaticBlockRow* blocks;
  std::size_t blockCount;
  const StaticWireRow* wires;
  std::size_t wireCount;
};

}  // namespace blockflow::codegen
