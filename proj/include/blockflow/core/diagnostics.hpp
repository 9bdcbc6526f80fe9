#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blockflow {

enum class DiagSeverity { Error, Warning };

/// Coarse fault domain; the CLI maps it to its exit code.
enum class DiagCategory { Model, Plugin, Io, Runtime };

struct Diagnostic {
  DiagSeverity severity = DiagSeverity::Error;
  DiagCategory category = DiagCategory::Model;
  std::string code;      // stable machine-readable identifier
  std::string message;   // human-readable, names the offending entities
  std::string instance;  // block instance, when one is involved

  std::string format() const;
};

/// Ordered collector. Validation phases append everything they find instead
/// of stopping at the first fault, so one run reports independent problems
/// together.
class Diagnostics {
 public:
  void error(DiagCategory category, std::string code, std::string message,
             std::string instance = {});
  void warning(DiagCategory category, std::string code, std::string message,
               std::string instance = {});
  void append(const Diagnostics& other);

  bool ok() const;  // true when no errors (warnings allowed)
  bool hasCategory(DiagCategory category) const;
  bool hasCode(std::string_view code) const;

  const std::vector<Diagnostic>& items() const { return items_; }
  bool empty() const { return items_.empty(); }

  /// One line per diagnostic, suitable for stderr.
  std::string format() const;

 private:
  std::vector<Diagnostic> items_;
};

/// Process exit code for a finished command: 0 when `diags` holds no error,
/// otherwise decided by the first error's category: Model 1, Plugin 2, Io 3,
/// Runtime 4.
int exitCodeFor(const Diagnostics& diags);

}  // namespace blockflow
