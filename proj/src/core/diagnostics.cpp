#include "blockflow/core/diagnostics.hpp"

#include <algorithm>

namespace blockflow {

std::string Diagnostic::format() const {
  std::string out = severity == DiagSeverity::Error ? "error" : "warning";
  out += " [" + code + "]";
  if (!instance.empty()) out += " " + instance + ":";
  out += " " + message;
  return out;
}

void Diagnostics::error(DiagCategory category, std::string code,
                        std::string message, std::string instance) {
  items_.push_back({DiagSeverity::Error, category, std::move(code),
                    std::move(message), std::move(instance)});
}

void Diagnostics::warning(DiagCategory category, std::string code,
                          std::string message, std::string instance) {
  items_.push_back({DiagSeverity::Warning, category, std::move(code),
                    std::move(message), std::move(instance)});
}

void Diagnostics::append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool Diagnostics::ok() const {
  return std::none_of(items_.begin(), items_.end(), [](const Diagnostic& d) {
    return d.severity == DiagSeverity::Error;
  });
}

bool Diagnostics::hasCategory(DiagCategory category) const {
  return std::any_of(items_.begin(), items_.end(), [&](const Diagnostic& d) {
    return d.severity == DiagSeverity::Error && d.category == category;
  });
}

bool Diagnostics::hasCode(std::string_view code) const {
  return std::any_of(items_.begin(), items_.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

std::string Diagnostics::format() const {
  std::string out;
  for (const auto& item : items_) {
    out += item.format();
    out += '\n';
  }
  return out;
}

int exitCodeFor(const Diagnostics& diags) {
  for (const Diagnostic& item : diags.items()) {
    if (item.severity != DiagSeverity::Error) continue;
    switch (item.category) {
      case DiagCategory::Model:
        return 1;
      case DiagCategory::Plugin:
        return 2;
      case DiagCategory::Io:
        return 3;
      case DiagCategory::Runtime:
        return 4;
    }
  }
  return 0;
}

}  // namespace blockflow
