#include "blockflow/core/params.hpp"

#include "blockflow/util/csv.hpp"

namespace blockflow {

std::string parameterValueText(const ParameterValue& value) {
  if (const auto* d = std::get_if<double>(&value)) {
    return util::formatDouble(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*i);
  }
  if (const auto* b = std::get_if<bool>(&value)) {
    return *b ? "true" : "false";
  }
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  const auto& v = std::get<std::vector<double>>(value);
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += util::formatDouble(v[i]);
  }
  return out + "]";
}

std::string_view parameterKindName(ParameterKind kind) {
  switch (kind) {
    case ParameterKind::Scalar:
      return "float64 scalar";
    case ParameterKind::Integer:
      return "int scalar";
    case ParameterKind::Boolean:
      return "bool";
    case ParameterKind::String:
      return "string";
    case ParameterKind::Vector:
      return "float64 vector";
  }
  return "?";
}

const Parameter* ParamReader::lookup(std::string_view name) const {
  return scope_ == Scope::Parameter ? ctx_.findParameter(name)
                                    : ctx_.findConfiguration(name);
}

bool ParamReader::has(std::string_view name) const {
  return lookup(name) != nullptr;
}

void ParamReader::fail(std::string_view name, std::string_view detail) {
  if (!status_.ok()) return;  // first error wins
  status_ = Status::failure("parameter '" + std::string(name) + "': " +
                            std::string(detail));
}

double ParamReader::scalar(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return 0.0;
  }
  if (const auto* d = std::get_if<double>(&p->value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&p->value)) {
    return static_cast<double>(*i);
  }
  fail(name, "expected float64 scalar, found " +
                 std::string(parameterKindName(p->kind())));
  return 0.0;
}

double ParamReader::scalarOr(std::string_view name, double fallback) {
  return has(name) ? scalar(name) : fallback;
}

std::int64_t ParamReader::integer(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return 0;
  }
  if (const auto* i = std::get_if<std::int64_t>(&p->value)) return *i;
  fail(name, "expected int scalar, found " +
                 std::string(parameterKindName(p->kind())));
  return 0;
}

std::int64_t ParamReader::integerOr(std::string_view name,
                                    std::int64_t fallback) {
  return has(name) ? integer(name) : fallback;
}

bool ParamReader::boolean(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return false;
  }
  if (const auto* b = std::get_if<bool>(&p->value)) return *b;
  fail(name,
       "expected bool, found " + std::string(parameterKindName(p->kind())));
  return false;
}

bool ParamReader::booleanOr(std::string_view name, bool fallback) {
  return has(name) ? boolean(name) : fallback;
}

std::string ParamReader::text(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return {};
  }
  if (const auto* s = std::get_if<std::string>(&p->value)) return *s;
  fail(name,
       "expected string, found " + std::string(parameterKindName(p->kind())));
  return {};
}

std::string ParamReader::textOr(std::string_view name, std::string fallback) {
  return has(name) ? text(name) : fallback;
}

std::vector<double> ParamReader::vector(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return {};
  }
  if (const auto* v = std::get_if<std::vector<double>>(&p->value)) return *v;
  fail(name, "expected float64 vector, found " +
                 std::string(parameterKindName(p->kind())));
  return {};
}

std::vector<double> ParamReader::vectorOr(std::string_view name,
                                          std::vector<double> fallback) {
  return has(name) ? vector(name) : fallback;
}

std::vector<double> ParamReader::scalarOrVector(std::string_view name) {
  const Parameter* p = lookup(name);
  if (p == nullptr) {
    fail(name, "missing");
    return {};
  }
  if (const auto* v = std::get_if<std::vector<double>>(&p->value)) return *v;
  if (const auto* d = std::get_if<double>(&p->value)) return {*d};
  if (const auto* i = std::get_if<std::int64_t>(&p->value)) {
    return {static_cast<double>(*i)};
  }
  fail(name, "expected float64 scalar or vector, found " +
                 std::string(parameterKindName(p->kind())));
  return {};
}

}  // namespace blockflow
