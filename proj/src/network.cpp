#include "riskbn/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace riskbn {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::cycle_detected: return "CycleDetected";
    case ErrorCode::cpt_shape_mismatch: return "CptShapeMismatch";
    case ErrorCode::column_not_normalized: return "ColumnNotNormalized";
    case ErrorCode::unknown_parent: return "UnknownParent";
    case ErrorCode::unknown_node: return "UnknownNode";
    case ErrorCode::unknown_state: return "UnknownState";
    case ErrorCode::duplicate_node: return "DuplicateNode";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::rate_out_of_range: return "RateOutOfRange";
    case ErrorCode::unknown_scenario: return "UnknownScenario";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::invalid_query: return "InvalidQuery";
    case ErrorCode::inconsistent_evidence: return "InconsistentEvidence";
    case ErrorCode::missing_parent_assignment: return "MissingParentAssignment";
    case ErrorCode::state_space_too_large: return "StateSpaceTooLarge";
    case ErrorCode::all_weights_zero: return "AllWeightsZero";
    case ErrorCode::alternative_space_too_large: return "AlternativeSpaceTooLarge";
    case ErrorCode::incomplete_assignment: return "IncompleteAssignment";
    case ErrorCode::conflicting_overrides: return "ConflictingOverrides";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::step_cap_exceeded: return "StepCapExceeded";
    case ErrorCode::invalid_sweep: return "InvalidSweep";
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

bool Network::has_node(std::string_view id) const {
  return index_.find(id) != index_.end();
}

std::size_t Network::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    fail(ErrorCode::unknown_node, "unknown node '" + std::string(id) + "'");
  return it->second;
}

std::size_t Network::state_index(std::size_t node, std::string_view label) const {
  const auto& states = specs_[node].states;
  for (std::size_t s = 0; s < states.size(); ++s)
    if (states[s] == label) return s;
  fail(ErrorCode::unknown_state, "node '" + specs_[node].id +
                                     "' has no state '" + std::string(label) +
                                     "'");
}

std::vector<std::pair<std::size_t, std::size_t>> Network::resolve(
    const Evidence& evidence) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(evidence.size());
  for (const auto& [id, label] : evidence) {
    std::size_t n = index_of(id);
    out.emplace_back(n, state_index(n, label));
  }
  return out;
}

namespace {

std::size_t config_count(const NodeSpec& spec,
                         const std::map<std::string, std::size_t>& cards) {
  std::size_t n = 1;
  for (const auto& p : spec.parents) {
    auto it = cards.find(p);
    n *= (it == cards.end()) ? 1 : it->second;
  }
  return n;
}

}  // namespace

ValidationReport validate(std::span<const NodeSpec> specs,
                          std::span<const Cpt> cpts) {
  ValidationReport report;
  auto add = [&](ErrorCode kind, const std::string& node,
                 const std::string& detail, double residual = 0.0) {
    report.violations.push_back({kind, node, detail, residual});
  };

  if (specs.size() != cpts.size()) {
    add(ErrorCode::invalid_argument, "",
        "node and CPT lists differ in length");
    return report;
  }
  if (specs.empty()) {
    add(ErrorCode::invalid_argument, "", "empty node list");
    return report;
  }

  std::map<std::string, std::size_t> cards;
  for (const auto& s : specs) {
    if (s.id.empty()) add(ErrorCode::invalid_argument, s.id, "empty node id");
    if (cards.count(s.id))
      add(ErrorCode::duplicate_node, s.id, "duplicate node id");
    cards[s.id] = s.states.size();
  }

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.states.size() < 2)
      add(ErrorCode::invalid_argument, s.id, "fewer than 2 states");
    std::set<std::string> seen_states(s.states.begin(), s.states.end());
    if (seen_states.size() != s.states.size())
      add(ErrorCode::invalid_argument, s.id, "duplicate state labels");
    std::set<std::string> seen_parents;
    for (const auto& p : s.parents) {
      if (!cards.count(p))
        add(ErrorCode::unknown_parent, s.id, "unknown parent '" + p + "'");
      if (!seen_parents.insert(p).second)
        add(ErrorCode::invalid_argument, s.id, "duplicate parent '" + p + "'");
      if (p == s.id) add(ErrorCode::cycle_detected, s.id, "self-loop");
    }

    const Cpt& c = cpts[i];
    std::size_t want_cols = config_count(s, cards);
    if (c.rows != s.states.size() || c.cols != want_cols ||
        c.values.size() != c.rows * c.cols) {
      std::ostringstream os;
      os << "expected " << s.states.size() << "x" << want_cols << ", got "
         << c.rows << "x" << c.cols << " (" << c.values.size() << " values)";
      add(ErrorCode::cpt_shape_mismatch, s.id, os.str());
      continue;
    }
    for (std::size_t col = 0; col < c.cols; ++col) {
      double sum = 0.0;
      bool in_range = true;
      for (std::size_t r = 0; r < c.rows; ++r) {
        double v = c.at(r, col);
        if (!(v >= 0.0 && v <= 1.0)) in_range = false;
        sum += v;
      }
      if (!in_range)
        add(ErrorCode::column_not_normalized, s.id,
            "entry outside [0,1] in column " + std::to_string(col));
      else if (std::abs(sum - 1.0) > kNormalizationTolerance)
        add(ErrorCode::column_not_normalized, s.id,
            "column " + std::to_string(col) + " sums to " +
                std::to_string(sum),
            std::abs(sum - 1.0));
    }
  }

  // cycle check over resolvable arcs
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < specs.size(); ++i) pos.emplace(specs[i].id, i);
  std::vector<std::size_t> indeg(specs.size(), 0);
  std::vector<std::vector<std::size_t>> children(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (const auto& p : specs[i].parents) {
      auto it = pos.find(p);
      if (it != pos.end() && it->second != i) {
        children[it->second].push_back(i);
        ++indeg[i];
      }
    }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> q;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (indeg[i] == 0) q.push(i);
  std::size_t emitted = 0;
  std::vector<std::size_t> order;
  while (!q.empty()) {
    std::size_t i = q.top();
    q.pop();
    ++emitted;
    for (std::size_t c : children[i])
      if (--indeg[c] == 0) q.push(c);
  }
  if (emitted != specs.size()) {
    std::string names;
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (indeg[i] > 0) names += (names.empty() ? "" : ", ") + specs[i].id;
    add(ErrorCode::cycle_detected, "", "cycle through: " + names);
  }
  return report;
}

Network build_network(std::vector<NodeSpec> specs, std::vector<Cpt> cpts,
                      std::string name, Metadata metadata) {
  ValidationReport report = validate(specs, cpts);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    std::string what = std::string(error_code_name(v.kind)) +
                       (v.node.empty() ? "" : " [" + v.node + "]") + ": " +
                       v.detail;
    if (report.violations.size() > 1)
      what += " (+" + std::to_string(report.violations.size() - 1) +
              " more violations)";
    fail(v.kind, what);
  }

  // Kahn's algorithm, smallest declaration index first. Already-topological
  // input keeps its order.
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < specs.size(); ++i) pos.emplace(specs[i].id, i);
  std::vector<std::size_t> indeg(specs.size(), 0);
  std::vector<std::vector<std::size_t>> children(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (const auto& p : specs[i].parents) {
      std::size_t pi = pos.at(p);
      children[pi].push_back(i);
      ++indeg[i];
    }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> q;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (indeg[i] == 0) q.push(i);
  std::vector<std::size_t> order;
  order.reserve(specs.size());
  while (!q.empty()) {
    std::size_t i = q.top();
    q.pop();
    order.push_back(i);
    for (std::size_t c : children[i])
      if (--indeg[c] == 0) q.push(c);
  }

  Network net;
  net.name_ = std::move(name);
  net.metadata_ = std::move(metadata);
  net.specs_.reserve(specs.size());
  net.cpts_.reserve(cpts.size());
  for (std::size_t i : order) {
    net.index_.emplace(specs[i].id, net.specs_.size());
    net.specs_.push_back(std::move(specs[i]));
    net.cpts_.push_back(std::move(cpts[i]));
  }
  net.parent_indices_.resize(net.specs_.size());
  for (std::size_t i = 0; i < net.specs_.size(); ++i) {
    for (const auto& p : net.specs_[i].parents)
      net.parent_indices_[i].push_back(net.index_.at(p));
  }
  return net;
}

ValidationReport validate(const Network& net) {
  std::vector<NodeSpec> specs;
  std::vector<Cpt> cpts;
  specs.reserve(net.size());
  cpts.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    specs.push_back(net.spec(i));
    cpts.push_back(net.cpt(i));
  }
  return validate(specs, cpts);
}

double cpt_lookup(const Network& net, std::string_view child,
                  std::string_view child_state,
                  const std::map<std::string, std::string>& parent_assignment) {
  std::size_t node = net.index_of(child);
  std::size_t state = net.state_index(node, child_state);
  const NodeSpec& spec = net.spec(node);
  if (parent_assignment.size() != spec.parents.size()) {
    for (const auto& p : spec.parents)
      if (!parent_assignment.count(p))
        fail(ErrorCode::missing_parent_assignment,
             "no assignment for parent '" + p + "' of '" + spec.id + "'");
    fail(ErrorCode::invalid_argument,
         "assignment does not cover exactly the parents of '" + spec.id + "'");
  }
  std::size_t config = 0;
  for (std::size_t k = 0; k < spec.parents.size(); ++k) {
    auto it = parent_assignment.find(spec.parents[k]);
    if (it == parent_assignment.end())
      fail(ErrorCode::missing_parent_assignment,
           "no assignment for parent '" + spec.parents[k] + "' of '" +
               spec.id + "'");
    std::size_t pi = net.parents(node)[k];
    config = config * net.cardinality(pi) + net.state_index(pi, it->second);
  }
  return net.cpt(node).at(state, config);
}

}  // namespace riskbn
