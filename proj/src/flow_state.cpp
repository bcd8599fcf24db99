#include "fairflow/flow_state.hpp"

#include "json.hpp"

namespace fairflow {

std::string flow_state_to_json(const Network& net, const FlowState& fs) {
  nlohmann::json j;
  j["alpha"] = fs.alpha;
  j["edge_flow"] = fs.edge_flow;
  j["objectives"] = {{"h_so", fs.h_so}, {"h_ue", fs.h_ue}, {"h_interp", fs.h_interp}};
  j["relative_gap"] = fs.relative_gap;
  j["iterations"] = fs.iterations;
  j["commodities"] = nlohmann::json::array();
  for (size_t k = 0; k < fs.paths.size(); ++k) {
    const Commodity& c = net.commodities[k];
    nlohmann::json jk;
    jk["origin"] = c.origin;
    jk["destination"] = c.destination;
    jk["demand"] = c.demand;
    jk["paths"] = nlohmann::json::array();
    for (const auto& p : fs.paths[k]) {
      nlohmann::json jp;
      std::vector<int> vertices{c.origin};
      for (int e : p.edges) vertices.push_back(net.edges[static_cast<size_t>(e)].head);
      jp["vertices"] = vertices;
      jp["edges"] = p.edges;
      jp["weight"] = p.weight;
      jk["paths"].push_back(jp);
    }
    j["commodities"].push_back(jk);
  }
  return j.dump(2);
}

}  // namespace fairflow
