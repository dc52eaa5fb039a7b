#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riskbn/dbn.hpp"
#include "riskbn/decision.hpp"
#include "riskbn/hazid.hpp"
#include "riskbn/network.hpp"

namespace riskbn::models {

/// Per-year failure probability of one component, with its data source.
struct FailureRate {
  std::string component;
  double p_annual = 0.0;
  std::string source;
};

std::vector<FailureRate> parse_failure_rates(std::string_view csv);
std::vector<FailureRate> load_failure_rates(const std::filesystem::path& path);

/// Everything bundled for one operating scenario.
struct ScenarioBundle {
  std::string label;
  Network network;                        // static model
  std::vector<std::string> absorbing;     // nodes with persistent failure
  DecisionNetwork decision;
  std::vector<HazardRecord> pha;

  /// Temporal template: absorbing nodes keep their failure state across
  /// slices (transition from their annual prior via annual_to_step); every
  /// other root is redrawn from its prior each slice.
  TwoSliceNetwork dynamics(double step_hours = 1.0) const;
};

/// Loads a bundled scenario ("seabed" or "confined"); throws
/// unknown_scenario otherwise.
ScenarioBundle scenario(const std::string& label);

const std::vector<std::string>& scenario_labels();

/// Raw bundled file contents (same bytes as the files under models/).
std::string_view bundled_model_json(const std::string& label);
std::string_view bundled_pha_csv(const std::string& label);
std::string_view bundled_failure_rates_csv();

/// Maps a failure-rate component name to its network node id.
std::string component_node_id(const std::string& component);

/// Builds a temporal template over `net` in which `absorbing` nodes persist
/// (their slice-0 prior taken as the per-year rate) and all other nodes
/// follow the static template.
TwoSliceNetwork make_absorbing_dynamics(const Network& net,
                                        const std::vector<std::string>& absorbing,
                                        double step_hours);

}  // namespace riskbn::models
