#include "fairflow/tntp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "fairflow/errors.hpp"
#include "json.hpp"

namespace fairflow {

namespace {

std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// strip ~ comments and the trailing ';', collapse whitespace
std::string clean_line(const std::string& line) {
  std::string s = line;
  auto tilde = s.find('~');
  if (tilde != std::string::npos) s.erase(tilde);
  for (char& ch : s)
    if (ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
  return s;
}

struct Metadata {
  std::map<std::string, std::string> values;
  size_t body_start = 0;  // line index after <END OF METADATA>
};

Metadata parse_metadata(const std::vector<std::string>& lines, const std::string& what) {
  Metadata md;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] != '<') {
      // header ended without the terminator
      throw ParseError(what + ": line " + std::to_string(i + 1) +
                       ": expected metadata tag before data");
    }
    auto close = line.find('>', first);
    if (close == std::string::npos)
      throw ParseError(what + ": line " + std::to_string(i + 1) + ": unterminated metadata tag");
    std::string key = line.substr(first + 1, close - first - 1);
    std::string value = line.substr(close + 1);
    auto b = value.find_first_not_of(" \t\r");
    value = (b == std::string::npos) ? "" : value.substr(b, value.find_last_not_of(" \t\r") - b + 1);
    if (key == "END OF METADATA") {
      md.body_start = i + 1;
      return md;
    }
    md.values[key] = value;
  }
  throw ParseError(what + ": missing <END OF METADATA>");
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

int require_int(const Metadata& md, const std::string& key, const std::string& what) {
  auto it = md.values.find(key);
  if (it == md.values.end()) throw ParseError(what + ": missing <" + key + ">");
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ParseError(what + ": <" + key + "> is not an integer");
  }
}

}  // namespace

Network parse_tntp_text(const std::string& net_text, const std::string& trips_text) {
  const std::string net_what = "net";
  auto net_lines = split_lines(net_text);
  Metadata md = parse_metadata(net_lines, net_what);
  int nodes = require_int(md, "NUMBER OF NODES", net_what);
  int links = require_int(md, "NUMBER OF LINKS", net_what);
  if (nodes <= 0) throw ParseError(net_what + ": <NUMBER OF NODES> must be positive");
  if (links < 0) throw ParseError(net_what + ": <NUMBER OF LINKS> must be nonnegative");

  Network net;
  net.vertex_count = nodes;
  for (size_t i = md.body_start; i < net_lines.size(); ++i) {
    std::istringstream is(clean_line(net_lines[i]));
    std::vector<double> fields;
    double v;
    while (is >> v) fields.push_back(v);
    if (fields.empty()) continue;
    const std::string where = net_what + ": line " + std::to_string(i + 1);
    if (fields.size() < 7) throw ParseError(where + ": expected at least 7 link fields");
    int tail = static_cast<int>(fields[0]);
    int head = static_cast<int>(fields[1]);
    double capacity = fields[2];
    double length = fields[3];
    double fftime = fields[4];
    double b = fields[5];
    double power = fields[6];
    if (tail < 1 || tail > nodes || head < 1 || head > nodes)
      throw InstanceError(where + ": vertex id out of range");
    if (capacity <= 0.0) throw InstanceError(where + ": nonpositive capacity");
    if (fftime < 0.0) throw InstanceError(where + ": negative free flow time");
    if (b < 0.0) throw InstanceError(where + ": negative B");
    double rounded = std::round(power);
    if (power < 0.0 || std::abs(power - rounded) > 1e-9)
      throw InstanceError(where + ": power must be a nonnegative integer");
    Edge e;
    e.tail = tail - 1;
    e.head = head - 1;
    e.fn = TravelTimeFn::bpr(fftime, capacity, b, static_cast<int>(rounded));
    e.normal_length = length;
    e.has_bpr = true;
    e.bpr_capacity = capacity;
    e.bpr_fftime = fftime;
    e.bpr_b = b;
    e.bpr_power = static_cast<int>(rounded);
    net.edges.push_back(std::move(e));
  }
  if (static_cast<int>(net.edges.size()) != links)
    throw ParseError(net_what + ": <NUMBER OF LINKS> says " + std::to_string(links) +
                     " but found " + std::to_string(net.edges.size()));

  const std::string trips_what = "trips";
  auto trip_lines = split_lines(trips_text);
  Metadata tmd = parse_metadata(trip_lines, trips_what);
  std::map<std::pair<int, int>, double> demand;  // deterministic commodity order
  int origin = -1;
  for (size_t i = tmd.body_start; i < trip_lines.size(); ++i) {
    std::string line = clean_line(trip_lines[i]);
    const std::string where = trips_what + ": line " + std::to_string(i + 1);
    auto first = line.find_first_not_of(" ");
    if (first == std::string::npos) continue;
    std::istringstream is(line);
    std::string token;
    is >> token;
    if (token == "Origin") {
      if (!(is >> origin) || origin < 1 || origin > nodes)
        throw ParseError(where + ": bad Origin header");
      continue;
    }
    if (origin < 0) throw ParseError(where + ": trip entry before any Origin header");
    // entries look like "dest : flow" repeated; the ';' was blanked above
    is.clear();
    is.str(line);
    int dest;
    while (is >> dest) {
      std::string colon;
      double flow;
      if (!(is >> colon) || colon != ":" || !(is >> flow))
        throw ParseError(where + ": malformed trip entry");
      if (dest < 1 || dest > nodes) throw InstanceError(where + ": destination out of range");
      if (flow < 0.0) throw InstanceError(where + ": negative demand");
      if (flow > 0.0) demand[{origin - 1, dest - 1}] += flow;
    }
  }
  for (const auto& [od, d] : demand)
    net.commodities.push_back({od.first, od.second, d, 1.0});

  for (const auto& diag : validate(net))
    if (diag.code == "unreachable-destination") throw ValidationError(diag.message);
  return net;
}

Network parse_tntp(const std::string& net_path, const std::string& trips_path) {
  return parse_tntp_text(load_file(net_path), load_file(trips_path));
}

std::string serialize_tntp_net(const Network& net) {
  for (size_t e = 0; e < net.edges.size(); ++e)
    if (!net.edges[e].has_bpr)
      throw InstanceError("serialize_tntp_net: edge " + std::to_string(e) +
                          " has no BPR row to write");
  std::ostringstream os;
  os << "<NUMBER OF NODES> " << net.vertex_count << "\n";
  os << "<NUMBER OF LINKS> " << net.edges.size() << "\n";
  os << "<FIRST THRU NODE> 1\n";
  os << "<END OF METADATA>\n\n";
  os << "~ \tInit node \tTerm node \tCapacity \tLength \tFree Flow Time \tB\tPower\tSpeed limit "
        "\tToll \tLink Type\t;\n";
  for (const auto& e : net.edges) {
    os << '\t' << e.tail + 1 << '\t' << e.head + 1 << '\t' << fmt17(e.bpr_capacity) << '\t'
       << fmt17(e.normal_length) << '\t' << fmt17(e.bpr_fftime) << '\t' << fmt17(e.bpr_b) << '\t'
       << e.bpr_power << "\t0\t0\t1\t;\n";
  }
  return os.str();
}

std::string serialize_tntp_trips(const Network& net) {
  std::ostringstream os;
  os << "<NUMBER OF ZONES> " << net.vertex_count << "\n";
  os << "<TOTAL OD FLOW> " << fmt17(net.total_demand()) << "\n";
  os << "<END OF METADATA>\n\n";
  int origin = -1;
  for (const auto& k : net.commodities) {
    if (k.origin != origin) {
      if (origin >= 0) os << "\n";
      origin = k.origin;
      os << "Origin " << origin + 1 << "\n";
    }
    os << "    " << k.destination + 1 << " : " << fmt17(k.demand) << ";\n";
  }
  if (origin >= 0) os << "\n";
  return os.str();
}

Network parse_json_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("json instance: ") + ex.what());
  }
  try {
    Network net;
    net.vertex_count = j.at("vertex_count").get<int>();
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.tail = je.at("tail").get<int>();
      e.head = je.at("head").get<int>();
      e.fn = TravelTimeFn(je.at("coefficients").get<std::vector<double>>());
      e.normal_length = je.value("normal_length", 0.0);
      net.edges.push_back(std::move(e));
    }
    for (const auto& jk : j.at("commodities")) {
      Commodity k;
      k.origin = jk.at("origin").get<int>();
      k.destination = jk.at("destination").get<int>();
      k.demand = jk.at("demand").get<double>();
      k.value_of_time = jk.value("value_of_time", 1.0);
      net.commodities.push_back(k);
    }
    return net;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("json instance: ") + ex.what());
  }
}

std::string serialize_json_instance(const Network& net) {
  nlohmann::json j;
  j["vertex_count"] = net.vertex_count;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : net.edges) {
    nlohmann::json je;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["coefficients"] = e.fn.coefficients();
    je["normal_length"] = e.normal_length;
    j["edges"].push_back(je);
  }
  j["commodities"] = nlohmann::json::array();
  for (const auto& k : net.commodities) {
    nlohmann::json jk;
    jk["origin"] = k.origin;
    jk["destination"] = k.destination;
    jk["demand"] = k.demand;
    jk["value_of_time"] = k.value_of_time;
    j["commodities"].push_back(jk);
  }
  return j.dump(2);
}

}  // namespace fairflow
