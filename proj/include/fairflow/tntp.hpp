#pragma once

#include <string>

#include "fairflow/network.hpp"

namespace fairflow {

// TNTP pair (net + trips). 1-based vertex ids in the files, 0-based in Network.
// Zero-demand O-D entries are dropped; duplicate O-D entries are summed;
// parallel edges stay distinct. Unreachable positive demand raises
// ValidationError naming the pair.
Network parse_tntp(const std::string& net_path, const std::string& trips_path);
Network parse_tntp_text(const std::string& net_text, const std::string& trips_text);

// Inverse of parsing; requires every edge to carry its BPR row.
std::string serialize_tntp_net(const Network& net);
std::string serialize_tntp_trips(const Network& net);

// JSON instance format for synthetic networks with raw polynomial coefficients.
Network parse_json_instance(const std::string& text);
std::string serialize_json_instance(const Network& net);

}  // namespace fairflow
