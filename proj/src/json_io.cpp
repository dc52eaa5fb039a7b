#include "riskbn/json_io.hpp"

#include <fstream>
#include <sstream>

namespace riskbn {

namespace {

NodeSpec spec_from_json(const nlohmann::json& jn) {
  NodeSpec spec;
  spec.id = jn.at("id").get<std::string>();
  spec.states = jn.at("states").get<std::vector<std::string>>();
  spec.parents = jn.value("parents", std::vector<std::string>{});
  return spec;
}

Cpt cpt_from_json(const nlohmann::json& jn, const NodeSpec& spec,
                  std::size_t cols) {
  Cpt cpt;
  cpt.rows = spec.states.size();
  cpt.cols = cols;
  if (!jn.at("cpt").is_array())
    fail(ErrorCode::parse_error, "node '" + spec.id + "': cpt must be an array");
  cpt.values = jn.at("cpt").get<std::vector<double>>();
  return cpt;
}

}  // namespace

std::pair<std::vector<NodeSpec>, std::vector<Cpt>> raw_network_from_json(
    const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes"))
    fail(ErrorCode::parse_error, "model document must contain 'nodes'");
  std::vector<NodeSpec> specs;
  std::vector<Cpt> cpts;
  std::map<std::string, std::size_t> cards;
  for (const auto& jn : doc.at("nodes"))
    cards[jn.at("id").get<std::string>()] = jn.at("states").size();
  for (const auto& jn : doc.at("nodes")) {
    NodeSpec spec = spec_from_json(jn);
    std::size_t cols = 1;
    for (const auto& p : spec.parents) {
      auto it = cards.find(p);
      if (it != cards.end()) cols *= it->second;
    }
    cpts.push_back(cpt_from_json(jn, spec, cols));
    specs.push_back(std::move(spec));
  }
  return {std::move(specs), std::move(cpts)};
}

Network network_from_json(const nlohmann::json& doc) {
  auto [specs, cpts] = raw_network_from_json(doc);
  Metadata metadata;
  if (doc.contains("metadata"))
    for (const auto& [k, v] : doc.at("metadata").items()) metadata[k] = v;
  return build_network(std::move(specs), std::move(cpts),
                       doc.value("name", std::string{}), std::move(metadata));
}

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json doc;
  doc["name"] = net.name();
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeSpec& s = net.spec(i);
    nlohmann::json jn;
    jn["id"] = s.id;
    jn["states"] = s.states;
    jn["parents"] = s.parents;
    jn["cpt"] = net.cpt(i).values;
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : net.metadata()) meta[k] = v;
  doc["metadata"] = std::move(meta);
  return doc;
}

ModelDocument model_from_json(const nlohmann::json& doc) {
  ModelDocument model;
  model.network = network_from_json(doc);

  if (doc.contains("temporal")) {
    const auto& t = doc.at("temporal");
    if (t.contains("absorbing"))
      model.temporal_absorbing = t.at("absorbing").get<std::vector<std::string>>();
    for (const auto& id : model.temporal_absorbing)
      model.network.index_of(id);
  }

  bool has_decisions = doc.contains("decisions") && !doc.at("decisions").empty();
  if (has_decisions) {
    model.has_decision_parts = true;
    // chance graph with dn_overrides applied, plus decision placeholder roots
    std::map<std::string, nlohmann::json> by_id;
    for (const auto& jn : doc.at("nodes"))
      by_id[jn.at("id").get<std::string>()] = jn;
    if (doc.contains("dn_overrides"))
      for (const auto& jn : doc.at("dn_overrides"))
        by_id[jn.at("id").get<std::string>()] = jn;

    std::vector<DecisionNode> decisions;
    nlohmann::json all_nodes = nlohmann::json::array();
    for (const auto& jd : doc.at("decisions")) {
      DecisionNode d;
      d.id = jd.at("id").get<std::string>();
      d.alternatives = jd.at("alternatives").get<std::vector<std::string>>();
      d.parents = jd.value("parents", std::vector<std::string>{});
      if (d.alternatives.size() < 2)
        fail(ErrorCode::parse_error,
             "decision '" + d.id + "' needs >= 2 alternatives");
      nlohmann::json jn;
      jn["id"] = d.id;
      jn["states"] = d.alternatives;
      jn["parents"] = nlohmann::json::array();
      std::vector<double> uniform(d.alternatives.size(),
                                  1.0 / static_cast<double>(d.alternatives.size()));
      jn["cpt"] = uniform;
      all_nodes.push_back(std::move(jn));
      decisions.push_back(std::move(d));
    }
    // keep chance nodes in file order, overrides substituted in place
    for (const auto& jn : doc.at("nodes"))
      all_nodes.push_back(by_id.at(jn.at("id").get<std::string>()));
    if (doc.contains("dn_overrides"))
      for (const auto& jn : doc.at("dn_overrides")) {
        std::string id = jn.at("id").get<std::string>();
        bool is_new = true;
        for (const auto& base : doc.at("nodes"))
          if (base.at("id").get<std::string>() == id) is_new = false;
        if (is_new) all_nodes.push_back(jn);
      }

    nlohmann::json dn_doc;
    dn_doc["name"] = doc.value("name", std::string{}) + ".dn";
    dn_doc["nodes"] = all_nodes;
    if (doc.contains("metadata")) dn_doc["metadata"] = doc.at("metadata");
    Network dn_net = network_from_json(dn_doc);

    std::vector<UtilityNode> utilities;
    if (doc.contains("utilities"))
      for (const auto& ju : doc.at("utilities")) {
        UtilityNode u;
        u.id = ju.at("id").get<std::string>();
        u.parents = ju.value("parents", std::vector<std::string>{});
        u.table = ju.at("table").get<std::vector<double>>();
        utilities.push_back(std::move(u));
      }
    model.decision = DecisionNetwork(std::move(dn_net), std::move(decisions),
                                     std::move(utilities));
  }
  return model;
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::io_error, "cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error,
         "model file '" + path.string() + "': " + e.what());
  }
  try {
    return model_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error,
         "model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace riskbn
