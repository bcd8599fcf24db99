#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fairflow {

// Provenance sidecar written next to every CLI output: what ran, on what,
// with which parameters, and the exact command line that reproduces it.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> inputs;      // label -> path
  std::vector<std::pair<std::string, std::string>> parameters;  // name -> value
  std::vector<std::string> outputs;
  std::string rerun;  // full argv, shell-quoted
  double wall_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& m);

}  // namespace fairflow
