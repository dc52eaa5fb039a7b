#include "riskbn/models.hpp"

#include <fstream>
#include <sstream>

#include "riskbn/json_io.hpp"
#include "riskbn/text_util.hpp"
#include "riskbn_bundled_data.hpp"

namespace riskbn::models {

std::vector<FailureRate> parse_failure_rates(std::string_view csv) {
  std::vector<FailureRate> rates;
  std::size_t pos = 0, line = 1;
  if (csv.empty()) return rates;
  std::vector<std::string> header = csv_parse_line(csv, pos);
  if (header != std::vector<std::string>{"component", "p_annual", "source"})
    fail(ErrorCode::parse_error, "unexpected failure-rate header");
  while (pos < csv.size()) {
    ++line;
    std::vector<std::string> f = csv_parse_line(csv, pos);
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 3)
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line) + ": expected 3 fields");
    FailureRate r;
    r.component = f[0];
    try {
      std::size_t used = 0;
      r.p_annual = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument(f[1]);
    } catch (...) {
      fail(ErrorCode::parse_error, "line " + std::to_string(line) +
                                       ": bad probability '" + f[1] + "'");
    }
    if (!(r.p_annual >= 0.0) || !(r.p_annual <= 1.0))
      fail(ErrorCode::rate_out_of_range,
           "line " + std::to_string(line) + ": probability " + f[1] +
               " outside [0,1]");
    r.source = f[2];
    rates.push_back(std::move(r));
  }
  return rates;
}

std::vector<FailureRate> load_failure_rates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_failure_rates(buf.str());
}

const std::vector<std::string>& scenario_labels() {
  static const std::vector<std::string> labels = {"seabed", "confined"};
  return labels;
}

std::string_view bundled_model_json(const std::string& label) {
  if (label == "seabed") return bundled::kSeabedModelJson;
  if (label == "confined") return bundled::kConfinedModelJson;
  fail(ErrorCode::unknown_scenario, "unknown scenario '" + label + "'");
}

std::string_view bundled_pha_csv(const std::string& label) {
  if (label == "seabed") return bundled::kSeabedPhaCsv;
  if (label == "confined") return bundled::kConfinedPhaCsv;
  fail(ErrorCode::unknown_scenario, "unknown scenario '" + label + "'");
}

std::string_view bundled_failure_rates_csv() {
  return bundled::kFailureRatesCsv;
}

std::string component_node_id(const std::string& component) {
  static const std::map<std::string, std::string> map = {
      {"Joint module actuators", "failure_of_joint_module"},
      {"Thruster module actuators", "failure_of_thruster_module"},
      {"DVL sensor", "dvl_failure"},
      {"IMU sensor", "imu_failure"},
      {"UHI sensor", "uhi_failure"},
      {"Cameras", "camera_failure"},
      {"LED lights", "led_failure"},
      {"Leakage sensor", "leakage"},
      {"Batteries", "battery_failure"},
  };
  auto it = map.find(component);
  if (it == map.end())
    fail(ErrorCode::unknown_node,
         "no node mapping for component '" + component + "'");
  return it->second;
}

TwoSliceNetwork make_absorbing_dynamics(const Network& net,
                                        const std::vector<std::string>& absorbing,
                                        double step_hours) {
  std::vector<TemporalArc> arcs;
  for (const auto& id : absorbing) {
    std::size_t i = net.index_of(id);
    if (!net.parents(i).empty())
      fail(ErrorCode::invalid_argument,
           "absorbing node '" + id + "' must be a root");
    if (net.cardinality(i) != 2)
      fail(ErrorCode::invalid_argument,
           "absorbing node '" + id + "' must be binary");
    double p_fail = net.cpt(i).at(0, 0);  // failed state first
    double p_step = annual_to_step(p_fail, step_hours);
    Cpt transition;
    transition.rows = 2;
    transition.cols = 2;
    // columns: previous state (failed, healthy)
    transition.values = {1.0, p_step, 0.0, 1.0 - p_step};
    arcs.push_back({id, id, std::move(transition)});
  }
  return TwoSliceNetwork(net, net, std::move(arcs), step_hours);
}

ScenarioBundle scenario(const std::string& label) {
  ScenarioBundle bundle;
  bundle.label = label;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bundled_model_json(label));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error,
         "bundled model '" + label + "': " + e.what());
  }
  ModelDocument model = model_from_json(doc);
  bundle.network = std::move(model.network);
  bundle.absorbing = std::move(model.temporal_absorbing);
  if (!model.has_decision_parts)
    fail(ErrorCode::parse_error,
         "bundled model '" + label + "' lacks decision parts");
  bundle.decision = std::move(model.decision);
  bundle.pha = parse_pha_csv(bundled_pha_csv(label));
  return bundle;
}

TwoSliceNetwork ScenarioBundle::dynamics(double step_hours) const {
  return make_absorbing_dynamics(network, absorbing, step_hours);
}

}  // namespace riskbn::models
