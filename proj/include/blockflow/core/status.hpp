#pragma once

#include <string>
#include <utility>

namespace blockflow {

/// Outcome of a lifecycle call. Success carries no message; failure carries
/// a human-readable reason.
struct [[nodiscard]] Status {
  std::string message;

  bool ok() const { return message.empty(); }

  static Status success() { return {}; }
  static Status failure(std::string reason) { return {std::move(reason)}; }
};

}  // namespace blockflow
