#include "blockflow/graph/value_json.hpp"

namespace blockflow::graph {

bool valueFromJson(const nlohmann::json& value, ParameterValue& out) {
  using nlohmann::json;
  switch (value.type()) {
    case json::value_t::number_float:
      out = value.get<double>();
      return true;
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      out = value.get<std::int64_t>();
      return true;
    case json::value_t::boolean:
      out = value.get<bool>();
      return true;
    case json::value_t::string:
      out = value.get<std::string>();
      return true;
    case json::value_t::array: {
      std::vector<double> values;
      values.reserve(value.size());
      for (const json& element : value) {
        if (!element.is_number()) return false;
        values.push_back(element.get<double>());
      }
      out = std::move(values);
      return true;
    }
    default:
      return false;
  }
}

nlohmann::json valueToJson(const ParameterValue& value) {
  return std::visit(
      [](const auto& v) -> nlohmann::json { return nlohmann::json(v); },
      value);
}

}  // namespace blockflow::graph
