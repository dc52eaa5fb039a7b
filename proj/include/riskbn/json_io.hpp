#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "riskbn/decision.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

/// Model document as parsed from disk. `temporal_absorbing` lists nodes
/// whose failure state persists across time slices; decision/utility parts
/// are present only for decision-network files.
struct ModelDocument {
  Network network;
  std::vector<std::string> temporal_absorbing;
  bool has_decision_parts = false;
  DecisionNetwork decision;  // valid iff has_decision_parts
};

/// Parses the model JSON schema: {"name", "nodes":[{"id","states","parents",
/// "cpt"}...], optional "temporal":{"absorbing":[...]}, optional
/// "decisions"/"utilities"/"dn_overrides", "metadata"}. CPT arrays are flat
/// row-major, first state's row first, outermost (first) parent varying
/// slowest.
ModelDocument model_from_json(const nlohmann::json& doc);

ModelDocument load_model_file(const std::filesystem::path& path);

nlohmann::json network_to_json(const Network& net);

Network network_from_json(const nlohmann::json& doc);

/// Declaration lists as written in the file, without validation or
/// topological ordering; feed to validate() for a violation report.
std::pair<std::vector<NodeSpec>, std::vector<Cpt>> raw_network_from_json(
    const nlohmann::json& doc);

}  // namespace riskbn
