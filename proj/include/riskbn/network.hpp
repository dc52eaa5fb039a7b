#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskbn/error.hpp"

namespace riskbn {

/// Absolute tolerance for CPT column normalization.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Declaration of one categorical node: identifier, ordered state labels
/// (>= 2), ordered parent identifiers. Parent order fixes CPT column order.
struct NodeSpec {
  std::string id;
  std::vector<std::string> states;
  std::vector<std::string> parents;
};

/// Conditional probability table of one node. Rows are child states (in
/// state-label order), columns are joint parent configurations enumerated
/// with the first declared parent varying slowest. Stored row-major.
struct Cpt {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t state, std::size_t config) const {
    return values[state * cols + config];
  }
  double& at(std::size_t state, std::size_t config) {
    return values[state * cols + config];
  }
};

/// Hard evidence: node id -> observed state label.
using Evidence = std::map<std::string, std::string>;

using Metadata = std::map<std::string, nlohmann::json>;

/// One violation found by validate(). `residual` carries the numeric excess
/// where applicable (e.g. |column sum - 1|).
struct Violation {
  ErrorCode kind;
  std::string node;
  std::string detail;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Immutable discrete Bayesian network. Nodes are stored in a topological
/// order fixed deterministically at build time; all read accessors are safe
/// to call concurrently.
class Network {
 public:
  Network() = default;

  std::size_t size() const { return specs_.size(); }
  const std::string& name() const { return name_; }
  const Metadata& metadata() const { return metadata_; }

  const NodeSpec& spec(std::size_t i) const { return specs_[i]; }
  const Cpt& cpt(std::size_t i) const { return cpts_[i]; }
  std::size_t cardinality(std::size_t i) const { return specs_[i].states.size(); }
  const std::vector<std::size_t>& parents(std::size_t i) const {
    return parent_indices_[i];
  }

  bool has_node(std::string_view id) const;
  /// Index of a node; throws Error(unknown_node) when absent.
  std::size_t index_of(std::string_view id) const;
  /// Index of a state label within a node; throws Error(unknown_state).
  std::size_t state_index(std::size_t node, std::string_view label) const;

  /// Resolves evidence to (node, state) index pairs, rejecting unknown
  /// nodes/states.
  std::vector<std::pair<std::size_t, std::size_t>> resolve(
      const Evidence& evidence) const;

  friend Network build_network(std::vector<NodeSpec> specs,
                               std::vector<Cpt> cpts, std::string name,
                               Metadata metadata);

 private:
  std::string name_;
  Metadata metadata_;
  std::vector<NodeSpec> specs_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<std::size_t>> parent_indices_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Validates and assembles a network. Node order in the result is
/// topological: Kahn's algorithm emitting the smallest declaration index
/// first, so an already-sorted input keeps its order and rebuilding from
/// identical inputs is bit-reproducible.
///
/// Throws Error with code cycle_detected, unknown_parent, cpt_shape_mismatch,
/// column_not_normalized, duplicate_node or invalid_argument.
Network build_network(std::vector<NodeSpec> specs, std::vector<Cpt> cpts,
                      std::string name = {}, Metadata metadata = {});

/// Reports every invariant violation in raw declaration lists without
/// throwing. build_network accepts the input iff the report is empty.
ValidationReport validate(std::span<const NodeSpec> specs,
                          std::span<const Cpt> cpts);

/// Re-checks an already-built network (useful after deserialization).
ValidationReport validate(const Network& net);

/// Returns the stored CPT entry for child=child_state given exactly the
/// node's parents. No recomputation; bit-exact. The assignment must cover
/// the parents exactly (missing_parent_assignment / invalid_argument).
double cpt_lookup(const Network& net, std::string_view child,
                  std::string_view child_state,
                  const std::map<std::string, std::string>& parent_assignment);

}  // namespace riskbn
