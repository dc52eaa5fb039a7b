#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "riskbn/dbn.hpp"
#include "riskbn/decision.hpp"
#include "riskbn/hazid.hpp"
#include "riskbn/inference.hpp"
#include "riskbn/json_io.hpp"
#include "riskbn/models.hpp"
#include "riskbn/sensitivity.hpp"

namespace py = pybind11;
using namespace riskbn;

namespace {

py::dict posterior_to_dict(const Posterior& post, const Network& net) {
  py::dict marginals;
  py::dict errors;
  bool have_errors = false;
  for (const auto& m : post.marginals) {
    std::size_t node = net.index_of(m.node);
    py::dict dist;
    for (std::size_t s = 0; s < m.probabilities.size(); ++s)
      dist[py::str(net.spec(node).states[s])] = m.probabilities[s];
    marginals[py::str(m.node)] = dist;
    if (!m.std_errors.empty()) {
      have_errors = true;
      py::dict se;
      for (std::size_t s = 0; s < m.std_errors.size(); ++s)
        se[py::str(net.spec(node).states[s])] = m.std_errors[s];
      errors[py::str(m.node)] = se;
    }
  }
  py::dict out;
  out["posteriors"] = marginals;
  out["log_evidence"] = post.log_evidence;
  if (have_errors) out["std_errors"] = errors;
  return out;
}

Network network_from_json_str(const std::string& text) {
  return network_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_riskbn, m) {
  m.doc() = "Discrete Bayesian-network risk engine (core bindings)";

  py::register_exception<Error>(m, "EngineError");

  py::class_<Network>(m, "Network")
      .def_property_readonly("name", &Network::name)
      .def("__len__", &Network::size)
      .def("node_ids",
           [](const Network& net) {
             std::vector<std::string> ids;
             for (std::size_t i = 0; i < net.size(); ++i)
               ids.push_back(net.spec(i).id);
             return ids;
           })
      .def("states",
           [](const Network& net, const std::string& id) {
             return net.spec(net.index_of(id)).states;
           })
      .def("parents",
           [](const Network& net, const std::string& id) {
             return net.spec(net.index_of(id)).parents;
           })
      .def("to_json",
           [](const Network& net) { return network_to_json(net).dump(1); });

  m.def("network_from_json", &network_from_json_str,
        "Build a validated network from a model JSON string");
  m.def("load_model",
        [](const std::string& path) { return load_model_file(path).network; },
        "Load the static network from a model file");

  m.def("cpt_lookup", &cpt_lookup, py::arg("net"), py::arg("child"),
        py::arg("child_state"), py::arg("parent_assignment"));

  m.def("posterior_ve",
        [](const Network& net, const std::vector<std::string>& targets,
           const Evidence& evidence) {
          return posterior_to_dict(posterior_ve(net, {targets, evidence}), net);
        },
        py::arg("net"), py::arg("targets"), py::arg("evidence") = Evidence{});
  m.def("posterior_enumeration",
        [](const Network& net, const std::vector<std::string>& targets,
           const Evidence& evidence) {
          return posterior_to_dict(
              posterior_enumeration(net, {targets, evidence}), net);
        },
        py::arg("net"), py::arg("targets"), py::arg("evidence") = Evidence{});
  m.def("posterior_lw",
        [](const Network& net, const std::vector<std::string>& targets,
           const Evidence& evidence, std::uint64_t samples,
           std::uint64_t seed) {
          return posterior_to_dict(
              posterior_lw(net, {targets, evidence}, samples, seed), net);
        },
        py::arg("net"), py::arg("targets"), py::arg("evidence") = Evidence{},
        py::arg("samples") = 100000, py::arg("seed") = 0);

  m.def("annual_to_step", &annual_to_step, py::arg("p_annual"),
        py::arg("step_hours"));

  py::class_<models::ScenarioBundle>(m, "ScenarioBundle")
      .def_readonly("label", &models::ScenarioBundle::label)
      .def_readonly("network", &models::ScenarioBundle::network)
      .def_readonly("absorbing", &models::ScenarioBundle::absorbing);

  m.def("scenario", &models::scenario, py::arg("label"));
  m.def("scenario_labels",
        []() { return models::scenario_labels(); });

  m.def("simulate",
        [](const models::ScenarioBundle& bundle, std::size_t steps,
           const std::vector<std::string>& monitored, double step_hours,
           bool allow_beyond_cap) {
          TrajectoryResult run = filter(bundle.dynamics(step_hours), steps,
                                        monitored, kDefaultStepCap,
                                        allow_beyond_cap);
          py::list out;
          for (const auto& step : run.steps) {
            py::dict row;
            row["step"] = step.step;
            for (std::size_t k = 0; k < monitored.size(); ++k) {
              py::dict dist;
              for (std::size_t s = 0; s < run.state_labels[k].size(); ++s)
                dist[py::str(run.state_labels[k][s])] =
                    step.distributions[k][s];
              row[py::str(monitored[k])] = dist;
            }
            out.append(row);
          }
          return out;
        },
        py::arg("bundle"), py::arg("steps"), py::arg("monitored"),
        py::arg("step_hours") = 1.0, py::arg("allow_beyond_cap") = false);

  m.def("trajectory_csv",
        [](const models::ScenarioBundle& bundle, std::size_t steps,
           const std::vector<std::string>& monitored, double step_hours) {
          return trajectory_csv(
              filter(bundle.dynamics(step_hours), steps, monitored));
        },
        py::arg("bundle"), py::arg("steps"), py::arg("monitored"),
        py::arg("step_hours") = 1.0);

  m.def("tornado",
        [](const Network& net, const std::string& node,
           const std::string& state, const Evidence& evidence, double sweep,
           int points, bool roots_only, bool include_target) {
          TornadoOptions options{sweep, points, roots_only, include_target};
          auto entries = tornado(net, {node, state, evidence}, options);
          py::list out;
          for (const auto& e : entries) {
            py::dict row;
            row["node"] = e.parameter.node;
            row["state"] = e.parameter.state;
            row["parent_config"] = e.parameter.parent_config;
            row["baseline"] = e.baseline;
            row["low"] = e.low;
            row["high"] = e.high;
            row["spread"] = e.spread;
            row["additive"] = e.additive;
            out.append(row);
          }
          return out;
        },
        py::arg("net"), py::arg("node"), py::arg("state"),
        py::arg("evidence") = Evidence{}, py::arg("sweep") = 0.1,
        py::arg("points") = 11, py::arg("roots_only") = false,
        py::arg("include_target") = false);

  m.def("node_importance",
        [](const Network& net, const std::string& node,
           const std::string& state, const Evidence& evidence, double sweep,
           int points) {
          TornadoOptions options{sweep, points, false, false};
          auto ranked =
              node_importance(tornado(net, {node, state, evidence}, options));
          return ranked;
        },
        py::arg("net"), py::arg("node"), py::arg("state"),
        py::arg("evidence") = Evidence{}, py::arg("sweep") = 0.1,
        py::arg("points") = 11);

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("choices",
                             [](const Policy& p) { return p.choices; })
      .def_property_readonly(
          "expected_utility",
          [](const Policy& p) { return p.expected_utility; })
      .def("choice",
           [](const Policy& p, const std::string& d) { return p.choice(d); });

  m.def("optimal_policy",
        [](const models::ScenarioBundle& bundle, const Evidence& evidence) {
          return optimal_policy(bundle.decision, evidence);
        },
        py::arg("bundle"), py::arg("evidence") = Evidence{});
  m.def("expected_utility",
        [](const models::ScenarioBundle& bundle,
           const DecisionAssignment& assignment, const Evidence& evidence) {
          return expected_utility(bundle.decision, assignment, evidence);
        },
        py::arg("bundle"), py::arg("assignment"),
        py::arg("evidence") = Evidence{});

  m.def("pha_records",
        [](const std::string& label) {
          auto records = parse_pha_csv(models::bundled_pha_csv(label));
          py::list out;
          for (const auto& r : records) {
            py::dict row;
            row["scenario"] = r.scenario;
            row["hazard"] = r.hazard;
            row["event"] = r.event;
            row["causes"] = r.causes;
            row["consequences"] = r.consequences;
            row["freq"] = r.frequency.score;
            row["conseq"] = r.consequence.score;
            row["detect"] = r.detectability.score;
            row["rpn"] = compute_rpn(r).value;
            out.append(row);
          }
          return out;
        },
        py::arg("label"));

  m.def("failure_rates", []() {
    auto rates =
        models::parse_failure_rates(models::bundled_failure_rates_csv());
    py::list out;
    for (const auto& r : rates) {
      py::dict row;
      row["component"] = r.component;
      row["p_annual"] = r.p_annual;
      row["source"] = r.source;
      row["node"] = models::component_node_id(r.component);
      out.append(row);
    }
    return out;
  });
}
