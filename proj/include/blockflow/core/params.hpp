#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blockflow/core/block.hpp"
#include "blockflow/core/status.hpp"

namespace blockflow {

/// Typed parameter access with error accumulation. Blocks read all their
/// parameters through one reader and then check status() once; the first
/// missing or wrongly typed parameter wins and its message names the
/// parameter and both kinds.
///
/// Integer parameters coerce to scalar/vector reads (a graph file may spell
/// a gain as `2`); no other coercion is performed.
class ParamReader {
 public:
  enum class Scope { Parameter, Configuration };

  explicit ParamReader(const BlockContext& ctx,
                       Scope scope = Scope::Parameter)
      : ctx_(ctx), scope_(scope) {}

  bool has(std::string_view name) const;

  double scalar(std::string_view name);
  double scalarOr(std::string_view name, double fallback);
  std::int64_t integer(std::string_view name);
  std::int64_t integerOr(std::string_view name, std::int64_t fallback);
  bool boolean(std::string_view name);
  bool booleanOr(std::string_view name, bool fallback);
  std::string text(std::string_view name);
  std::string textOr(std::string_view name, std::string fallback);
  std::vector<double> vector(std::string_view name);
  std::vector<double> vectorOr(std::string_view name,
                               std::vector<double> fallback);

  /// Accepts either a scalar (returned as a one-element vector) or a vector.
  std::vector<double> scalarOrVector(std::string_view name);

  bool ok() const { return status_.ok(); }
  const Status& status() const { return status_; }

 private:
  const Parameter* lookup(std::string_view name) const;
  void fail(std::string_view name, std::string_view detail);

  const BlockContext& ctx_;
  Scope scope_;
  Status status_;
};

}  // namespace blockflow
