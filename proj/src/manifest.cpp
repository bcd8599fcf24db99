#include "fairflow/manifest.hpp"

#include "json.hpp"

namespace fairflow {

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["inputs"] = nlohmann::json::object();
  for (const auto& [label, path] : m.inputs) j["inputs"][label] = path;
  j["parameters"] = nlohmann::json::object();
  for (const auto& [name, value] : m.parameters) j["parameters"][name] = value;
  j["outputs"] = m.outputs;
  j["rerun"] = m.rerun;
  j["wall_seconds"] = m.wall_seconds;
  return j.dump(2);
}

}  // namespace fairflow
