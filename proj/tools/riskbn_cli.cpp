// Command-line front end: posterior queries, dynamic simulation, sensitivity
// tornado data, decision recommendation, PHA reporting and model validation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riskbn/dbn.hpp"
#include "riskbn/decision.hpp"
#include "riskbn/hazid.hpp"
#include "riskbn/inference.hpp"
#include "riskbn/json_io.hpp"
#include "riskbn/models.hpp"
#include "riskbn/sensitivity.hpp"
#include "riskbn/text_util.hpp"

namespace {

using namespace riskbn;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitModel = 2;
constexpr int kExitInference = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::step_cap_exceeded:
    case ErrorCode::invalid_sweep:
    case ErrorCode::unsupported_format:
    case ErrorCode::invalid_argument:
      return kExitUsage;
    case ErrorCode::invalid_query:
    case ErrorCode::inconsistent_evidence:
    case ErrorCode::missing_parent_assignment:
    case ErrorCode::unknown_node:
    case ErrorCode::unknown_state:
    case ErrorCode::state_space_too_large:
    case ErrorCode::all_weights_zero:
    case ErrorCode::alternative_space_too_large:
    case ErrorCode::incomplete_assignment:
    case ErrorCode::conflicting_overrides:
    case ErrorCode::domain_error:
      return kExitInference;
    default:
      return kExitModel;
  }
}

struct ModelArgs {
  std::string model_path;
  std::string scenario;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
  auto* model = cmd->add_option("--model", args.model_path,
                                "Path to a model JSON file");
  auto* scen = cmd->add_option("--scenario", args.scenario,
                               "Bundled scenario: seabed or confined");
  model->excludes(scen);
  scen->excludes(model);
}

struct LoadedModel {
  Network network;
  std::vector<std::string> absorbing;
  bool has_decision = false;
  DecisionNetwork decision;
  std::vector<HazardRecord> pha;  // bundled scenarios only
};

LoadedModel load(const ModelArgs& args) {
  LoadedModel out;
  if (!args.scenario.empty()) {
    models::ScenarioBundle bundle = models::scenario(args.scenario);
    out.network = std::move(bundle.network);
    out.absorbing = std::move(bundle.absorbing);
    out.has_decision = true;
    out.decision = std::move(bundle.decision);
    out.pha = std::move(bundle.pha);
    return out;
  }
  if (args.model_path.empty())
    fail(ErrorCode::invalid_argument, "pass --model or --scenario");
  ModelDocument doc = load_model_file(args.model_path);
  out.network = std::move(doc.network);
  out.absorbing = std::move(doc.temporal_absorbing);
  out.has_decision = doc.has_decision_parts;
  if (out.has_decision) out.decision = std::move(doc.decision);
  return out;
}

Evidence parse_evidence(const std::string& text) {
  Evidence ev;
  if (text.empty()) return ev;
  for (const auto& item : split_trimmed(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      fail(ErrorCode::invalid_argument,
           "evidence must be node=STATE, got '" + item + "'");
    if (!ev.emplace(trim(item.substr(0, eq)), trim(item.substr(eq + 1))).second)
      fail(ErrorCode::invalid_argument,
           "node appears twice in evidence: '" + item + "'");
  }
  return ev;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out)
    fail(ErrorCode::io_error, "short write to '" + path + "'");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RISKBN_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      fail(ErrorCode::invalid_argument,
           std::string("RISKBN_SEED is not an integer: '") + env + "'");
    }
  }
  return 0;
}

nlohmann::json posterior_to_json(const Posterior& post, const Network& net) {
  nlohmann::json marginals = nlohmann::json::object();
  nlohmann::json errors = nlohmann::json::object();
  bool have_errors = false;
  for (const auto& m : post.marginals) {
    std::size_t node = net.index_of(m.node);
    nlohmann::json dist = nlohmann::json::object();
    for (std::size_t s = 0; s < m.probabilities.size(); ++s)
      dist[net.spec(node).states[s]] = m.probabilities[s];
    marginals[m.node] = std::move(dist);
    if (!m.std_errors.empty()) {
      have_errors = true;
      nlohmann::json se = nlohmann::json::object();
      for (std::size_t s = 0; s < m.std_errors.size(); ++s)
        se[net.spec(node).states[s]] = m.std_errors[s];
      errors[m.node] = std::move(se);
    }
  }
  nlohmann::json doc;
  doc["posteriors"] = std::move(marginals);
  doc["log_evidence"] = post.log_evidence;
  if (have_errors) doc["std_errors"] = std::move(errors);
  return doc;
}

// ---------------------------------------------------------------- query ----

struct QueryArgs {
  ModelArgs model;
  std::string targets;
  std::string evidence;
  std::string method = "ve";
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
};

int run_query(const QueryArgs& args) {
  LoadedModel m = load(args.model);
  Query q;
  q.targets = split_trimmed(args.targets, ',');
  q.evidence = parse_evidence(args.evidence);
  Posterior post;
  nlohmann::json doc;
  if (args.method == "ve") {
    post = posterior_ve(m.network, q);
  } else if (args.method == "enum") {
    post = posterior_enumeration(m.network, q);
  } else if (args.method == "lw") {
    std::uint64_t seed = args.seed ? *args.seed : default_seed();
    post = posterior_lw(m.network, q, args.samples, seed);
    doc["samples"] = args.samples;
    doc["seed"] = seed;
  } else {
    fail(ErrorCode::invalid_argument,
         "unknown method '" + args.method + "' (ve, enum, lw)");
  }
  nlohmann::json result = posterior_to_json(post, m.network);
  for (auto& [k, v] : doc.items()) result[k] = v;
  result["method"] = args.method;
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ dbn ----

struct DbnArgs {
  ModelArgs model;
  std::size_t steps = 100;
  double step_hours = 1.0;
  std::string monitor;
  bool allow_long_run = false;
  std::string output;
};

int run_dbn(const DbnArgs& args) {
  LoadedModel m = load(args.model);
  if (!(args.step_hours > 0.0))
    fail(ErrorCode::invalid_argument, "--step-hours must be positive");
  std::vector<std::string> monitored = split_trimmed(args.monitor, ',');
  if (monitored.empty()) {
    if (m.network.has_node("loss_of_eely"))
      monitored.push_back("loss_of_eely");
    else
      fail(ErrorCode::invalid_argument,
           "pass --monitor for models without a loss_of_eely node");
  }
  if (args.allow_long_run && args.steps > kDefaultStepCap)
    std::cerr << "warning: running " << args.steps
              << " steps past the default cap of " << kDefaultStepCap << "\n";
  TwoSliceNetwork tsn =
      models::make_absorbing_dynamics(m.network, m.absorbing, args.step_hours);
  TrajectoryResult result = filter(tsn, args.steps, monitored, kDefaultStepCap,
                                   args.allow_long_run);
  write_output(args.output, trajectory_csv(result));
  return kExitOk;
}

// ---------------------------------------------------------- sensitivity ----

struct SensitivityArgs {
  ModelArgs model;
  std::string target;
  std::string evidence;
  double sweep = 0.1;
  int points = 11;
  bool roots_only = false;
  bool include_target = false;
  std::string svg_path;
  std::size_t svg_top = 15;
  std::string output;
};

int run_sensitivity(const SensitivityArgs& args) {
  LoadedModel m = load(args.model);
  auto eq = args.target.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == args.target.size())
    fail(ErrorCode::invalid_argument, "--target must be NODE=STATE");
  SensitivityTarget target;
  target.node = trim(args.target.substr(0, eq));
  target.state = trim(args.target.substr(eq + 1));
  target.evidence = parse_evidence(args.evidence);

  TornadoOptions options;
  options.sweep = args.sweep;
  options.points = args.points;
  options.roots_only = args.roots_only;
  options.include_target = args.include_target;
  std::vector<TornadoEntry> entries = tornado(m.network, target, options);
  write_output(args.output, tornado_csv(entries));
  if (!args.svg_path.empty()) {
    std::vector<TornadoEntry> top(
        entries.begin(),
        entries.begin() +
            static_cast<std::ptrdiff_t>(std::min(args.svg_top, entries.size())));
    write_output(args.svg_path, tornado_svg(top));
  }
  return kExitOk;
}

// --------------------------------------------------------------- decide ----

struct DecideArgs {
  ModelArgs model;
  std::string evidence;
  int guard = 3;
  std::string sequence_path;
  std::optional<double> abort_above;
};

nlohmann::json policy_to_json(const Policy& policy) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [d, alt] : policy.choices) doc[d] = alt;
  doc["eu"] = policy.expected_utility;
  return doc;
}

int run_decide(const DecideArgs& args) {
  LoadedModel m = load(args.model);
  if (!m.has_decision)
    fail(ErrorCode::invalid_argument,
         "model has no decision nodes; use a scenario bundle or add them");

  std::vector<SafetyOverride> overrides;
  if (args.abort_above) {
    double threshold = *args.abort_above;
    overrides.push_back(SafetyOverride{
        "abort-above",
        [threshold](const DecisionNetwork& dn, const Evidence& ev) {
          Query q{{"loss_of_eely"}, ev};
          Posterior post = posterior_ve(dn.graph(), q);
          std::size_t node = dn.graph().index_of("loss_of_eely");
          std::size_t s = dn.graph().state_index(node, "TRUE");
          return post.of("loss_of_eely").probabilities[s] > threshold;
        },
        {{"control_strategy", "abort"}}});
  }
  DwellGuard guard{args.guard};

  if (args.sequence_path.empty()) {
    Evidence ev = parse_evidence(args.evidence);
    Recommendation rec = recommend_with_guards(m.decision, ev, {}, guard,
                                               overrides);
    std::cout << policy_to_json(rec.emitted).dump(2) << "\n";
    return kExitOk;
  }

  std::ifstream in(args.sequence_path);
  if (!in)
    fail(ErrorCode::io_error, "cannot open '" + args.sequence_path + "'");
  std::vector<Recommendation> history;
  std::string line;
  std::size_t step = 0;
  while (std::getline(in, line)) {
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    Evidence ev;
    try {
      nlohmann::json jev = nlohmann::json::parse(trimmed);
      for (const auto& [k, v] : jev.items()) ev[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::parse_error,
           "sequence line " + std::to_string(step + 1) + ": " + e.what());
    }
    Recommendation rec =
        recommend_with_guards(m.decision, ev, history, guard, overrides);
    nlohmann::json out = policy_to_json(rec.emitted);
    out["step"] = step;
    std::cout << out.dump() << "\n";
    history.push_back(std::move(rec));
    ++step;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- hazid ----

struct HazidArgs {
  ModelArgs model;
  std::string pha_path;
  std::string format = "csv";
  bool rank = false;
};

int run_hazid(const HazidArgs& args) {
  std::vector<HazardRecord> records;
  if (!args.pha_path.empty()) {
    std::ifstream in(args.pha_path);
    if (!in)
      fail(ErrorCode::io_error, "cannot open '" + args.pha_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    records = parse_pha_csv(buf.str());
  } else if (!args.model.scenario.empty()) {
    records = parse_pha_csv(models::bundled_pha_csv(args.model.scenario));
  } else {
    fail(ErrorCode::invalid_argument, "pass --scenario or --pha FILE");
  }
  if (args.rank) records = rank_hazards(std::move(records));
  std::cout << render_pha(records, parse_pha_format(args.format));
  return kExitOk;
}

// -------------------------------------------------------------- validate ----

int run_validate(const ModelArgs& args) {
  nlohmann::json doc;
  if (!args.scenario.empty()) {
    doc = nlohmann::json::parse(models::bundled_model_json(args.scenario));
  } else if (!args.model_path.empty()) {
    std::ifstream in(args.model_path);
    if (!in)
      fail(ErrorCode::io_error, "cannot open '" + args.model_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::parse_error, std::string("model file: ") + e.what());
    }
  } else {
    fail(ErrorCode::invalid_argument, "pass --model or --scenario");
  }
  auto [specs, cpts] = raw_network_from_json(doc);
  ValidationReport report = validate(specs, cpts);
  if (report.ok()) {
    std::size_t arcs = 0;
    for (const auto& s : specs) arcs += s.parents.size();
    std::cout << "ok: " << specs.size() << " nodes, " << arcs << " arcs, "
              << "all CPT columns normalized\n";
    return kExitOk;
  }
  for (const auto& v : report.violations) {
    std::cout << error_code_name(v.kind);
    if (!v.node.empty()) std::cout << " [" << v.node << "]";
    std::cout << ": " << v.detail;
    if (v.residual > 0.0) std::cout << " (residual " << format_double(v.residual) << ")";
    std::cout << "\n";
  }
  return kExitModel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Bayesian-network risk engine for underwater "
               "snake-robot operations"};
  app.require_subcommand(1);

  QueryArgs query_args;
  auto* query = app.add_subcommand("query", "Posterior of target nodes");
  add_model_options(query, query_args.model);
  query->add_option("--target", query_args.targets,
                    "Target node(s), comma separated")->required();
  query->add_option("--evidence", query_args.evidence,
                    "Evidence as node=STATE[,node=STATE...]");
  query->add_option("--method", query_args.method,
                    "Inference method: ve, enum or lw");
  query->add_option("--samples", query_args.samples,
                    "Sample count for --method lw");
  query->add_option("--seed", query_args.seed,
                    "Sampler seed (default: RISKBN_SEED or 0)");

  DbnArgs dbn_args;
  auto* dbn = app.add_subcommand("dbn", "Dynamic simulation (forward filter)");
  add_model_options(dbn, dbn_args.model);
  dbn->add_option("--steps", dbn_args.steps, "Number of time slices")
      ->required();
  dbn->add_option("--step-hours", dbn_args.step_hours,
                  "Duration of one slice in hours");
  dbn->add_option("--monitor", dbn_args.monitor,
                  "Nodes to track, comma separated");
  dbn->add_flag("--allow-long-run", dbn_args.allow_long_run,
                "Raise the 1000-step cap (prints a warning)");
  dbn->add_option("--output", dbn_args.output, "Write CSV here instead of stdout");

  SensitivityArgs sens_args;
  auto* sens = app.add_subcommand("sensitivity",
                                  "One-way parameter sweeps, tornado ranking");
  add_model_options(sens, sens_args.model);
  sens->add_option("--target", sens_args.target, "Target as NODE=STATE")
      ->required();
  sens->add_option("--evidence", sens_args.evidence,
                   "Evidence as node=STATE[,...]");
  sens->add_option("--sweep", sens_args.sweep, "Relative sweep fraction");
  sens->add_option("--points", sens_args.points, "Sweep points (odd, >= 3)");
  sens->add_flag("--roots-only", sens_args.roots_only,
                 "Sweep only root priors");
  sens->add_flag("--include-target", sens_args.include_target,
                 "Also sweep the target node's own CPT");
  sens->add_option("--svg", sens_args.svg_path, "Write a tornado SVG here");
  sens->add_option("--svg-top", sens_args.svg_top,
                   "Bars in the SVG (top-ranked entries)");
  sens->add_option("--output", sens_args.output,
                   "Write CSV here instead of stdout");

  DecideArgs decide_args;
  auto* decide = app.add_subcommand("decide",
                                    "Expected-utility optimal policy");
  add_model_options(decide, decide_args.model);
  decide->add_option("--evidence", decide_args.evidence,
                     "Evidence as node=STATE[,...]");
  decide->add_option("--guard", decide_args.guard,
                     "Dwell guard: calls a change must persist")
      ->check(CLI::PositiveNumber);
  decide->add_option("--sequence", decide_args.sequence_path,
                     "JSON-lines file of evidence maps; one policy per line");
  decide->add_option("--abort-above", decide_args.abort_above,
                     "Force control_strategy=abort when P(loss) exceeds this");

  HazidArgs hazid_args;
  auto* hazid = app.add_subcommand("hazid", "PHA table with rpn scores");
  add_model_options(hazid, hazid_args.model);
  hazid->add_option("--pha", hazid_args.pha_path,
                    "PHA ingestion CSV (defaults to the bundled table)");
  hazid->add_option("--format", hazid_args.format, "Output format: csv or md");
  hazid->add_flag("--rank", hazid_args.rank, "Sort by rpn descending");

  ModelArgs validate_args;
  auto* val = app.add_subcommand("validate", "Check model invariants");
  add_model_options(val, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (query->parsed()) return run_query(query_args);
    if (dbn->parsed()) return run_dbn(dbn_args);
    if (sens->parsed()) return run_sensitivity(sens_args);
    if (decide->parsed()) return run_decide(decide_args);
    if (hazid->parsed()) return run_hazid(hazid_args);
    if (val->parsed()) return run_validate(validate_args);
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what()
              << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
