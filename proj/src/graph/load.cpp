#include "blockflow/graph/load.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blockflow/graph/value_json.hpp"
#include "blockflow/util/strings.hpp"

namespace blockflow::graph {
namespace {

using nlohmann::json;

std::string where(std::string_view origin) {
  return origin.empty() ? std::string("graph") : std::string(origin);
}

/// Line/column of a byte offset, for parse errors.
std::pair<std::size_t, std::size_t> lineAndColumn(std::string_view text,
                                                  std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

/// Reads an object of name→value into a sorted Parameter list.
bool convertParameters(const json& object, std::string_view owner,
                       std::string_view origin,
                       std::vector<Parameter>& out, Diagnostics& diags) {
  bool ok = true;
  for (const auto& [name, value] : object.items()) {
    Parameter param;
    param.name = name;
    if (!valueFromJson(value, param.value)) {
      diags.error(DiagCategory::Model, "graph.bad_parameter",
                  where(origin) + ": parameter '" + name + "' of " +
                      std::string(owner) +
                      " has an unsupported value (allowed: number, bool, "
                      "string, numeric array)");
      ok = false;
      continue;
    }
    out.push_back(std::move(param));
  }
  std::sort(out.begin(), out.end(),
            [](const Parameter& a, const Parameter& b) { return a.name < b.name; });
  return ok;
}

bool parseEndpoint(const std::string& text, std::string_view key,
                   std::string_view origin, std::string& block, int& port,
                   Diagnostics& diags) {
  if (util::parsePortRef(text, block, port)) return true;
  diags.error(DiagCategory::Model, "graph.bad_connection",
              where(origin) + ": connection " + std::string(key) + " '" +
                  text + "' is not of the form 'block.port_index'");
  return false;
}

}  // namespace

std::optional<GraphModel> parseGraph(std::string_view text,
                                     std::string_view originName,
                                     Diagnostics& diags) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = lineAndColumn(text, e.byte);
    std::ostringstream msg;
    msg << where(originName) << ":" << line << ":" << column << ": "
        << e.what();
    diags.error(DiagCategory::Model, "graph.parse_error", msg.str());
    return std::nullopt;
  }

  if (!doc.is_object()) {
    diags.error(DiagCategory::Model, "graph.parse_error",
                where(originName) + ": top level must be a JSON object");
    return std::nullopt;
  }

  GraphModel model;
  bool ok = true;

  if (!doc.contains("step_size") || !doc["step_size"].is_number()) {
    diags.error(DiagCategory::Model, "graph.bad_step_size",
                where(originName) + ": missing numeric 'step_size'");
    ok = false;
  } else {
    model.stepSize = doc["step_size"].get<double>();
    if (!(model.stepSize > 0.0)) {
      diags.error(DiagCategory::Model, "graph.bad_step_size",
                  where(originName) + ": stepSize must be positive, got " +
                      std::to_string(model.stepSize));
      ok = false;
    }
  }

  if (doc.contains("configuration")) {
    if (!doc["configuration"].is_object()) {
      diags.error(DiagCategory::Model, "graph.bad_configuration",
                  where(originName) + ": 'configuration' must be an object");
      ok = false;
    } else if (!convertParameters(doc["configuration"], "the configuration",
                                  originName, model.configuration, diags)) {
      ok = false;
    }
  }

  if (!doc.contains("blocks") || !doc["blocks"].is_array()) {
    diags.error(DiagCategory::Model, "graph.bad_blocks",
                where(originName) + ": missing 'blocks' array");
    return std::nullopt;
  }

  std::set<std::string> names;
  for (const json& entry : doc["blocks"]) {
    if (!entry.is_object()) {
      diags.error(DiagCategory::Model, "graph.bad_blocks",
                  where(originName) + ": every blocks[] entry must be an object");
      ok = false;
      continue;
    }
    BlockDescriptor block;
    bool fields = true;
    for (const char* key : {"name", "library", "label"}) {
      if (!entry.contains(key) || !entry[key].is_string() ||
          entry[key].get<std::string>().empty()) {
        diags.error(DiagCategory::Model, "graph.bad_blocks",
                    where(originName) + ": block entry missing string '" +
                        key + "'");
        fields = false;
      }
    }
    if (!fields) {
      ok = false;
      continue;
    }
    block.instanceName = entry["name"].get<std::string>();
    block.libraryName = entry["library"].get<std::string>();
    block.classLabel = entry["label"].get<std::string>();

    if (block.instanceName.find('.') != std::string::npos) {
      diags.error(DiagCategory::Model, "graph.bad_name",
                  where(originName) + ": block name '" + block.instanceName +
                      "' must not contain '.' (reserved for port references)");
      ok = false;
    }
    if (!names.insert(block.instanceName).second) {
      diags.error(DiagCategory::Model, "graph.duplicate_block",
                  where(originName) + ": duplicate block name '" +
                      block.instanceName + "'");
      ok = false;
    }
    if (entry.contains("parameters")) {
      if (!entry["parameters"].is_object()) {
        diags.error(DiagCategory::Model, "graph.bad_parameter",
                    where(originName) + ": 'parameters' of block '" +
                        block.instanceName + "' must be an object");
        ok = false;
      } else if (!convertParameters(entry["parameters"],
                                    "block '" + block.instanceName + "'",
                                    originName, block.parameters, diags)) {
        ok = false;
      }
    }
    model.blocks.push_back(std::move(block));
  }

  if (doc.contains("connections")) {
    if (!doc["connections"].is_array()) {
      diags.error(DiagCategory::Model, "graph.bad_connection",
                  where(originName) + ": 'connections' must be an array");
      return std::nullopt;
    }
    for (const json& entry : doc["connections"]) {
      if (!entry.is_object() || !entry.contains("from") ||
          !entry.contains("to") || !entry["from"].is_string() ||
          !entry["to"].is_string()) {
        diags.error(DiagCategory::Model, "graph.bad_connection",
                    where(originName) +
                        ": every connection needs string 'from' and 'to'");
        ok = false;
        continue;
      }
      Connection conn;
      bool endpoints =
          parseEndpoint(entry["from"].get<std::string>(), "from", originName,
                        conn.fromBlock, conn.fromPort, diags) &
          parseEndpoint(entry["to"].get<std::string>(), "to", originName,
                        conn.toBlock, conn.toPort, diags);
      if (!endpoints) {
        ok = false;
        continue;
      }
      model.connections.push_back(std::move(conn));
    }
  }

  // Endpoints must name declared blocks; inputs accept at most one driver.
  std::map<std::pair<std::string, int>, int> drivers;
  for (const Connection& conn : model.connections) {
    for (const std::string* endpoint : {&conn.fromBlock, &conn.toBlock}) {
      if (model.blockIndex(*endpoint) < 0) {
        diags.error(DiagCategory::Model, "graph.unknown_block",
                    where(originName) + ": connection references block '" +
                        *endpoint + "' which is never declared");
        ok = false;
      }
    }
    if (++drivers[{conn.toBlock, conn.toPort}] == 2) {
      diags.error(DiagCategory::Model, "graph.multi_driven_input",
                  where(originName) + ": input '" + conn.toBlock + "." +
                      std::to_string(conn.toPort) +
                      "' is driven by more than one connection");
      ok = false;
    }
  }

  if (!ok) return std::nullopt;
  return model;
}

std::optional<GraphModel> loadGraph(const std::filesystem::path& path,
                                    Diagnostics& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diags.error(DiagCategory::Io, "io.read_failed",
                "cannot read graph file '" + path.string() + "'");
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseGraph(buffer.str(), path.string(), diags);
}

}  // namespace blockflow::graph
