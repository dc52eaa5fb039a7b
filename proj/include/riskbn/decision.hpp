#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "riskbn/inference.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

struct DecisionNode {
  std::string id;
  std::vector<std::string> alternatives;   // >= 2, declaration order
  std::vector<std::string> parents;        // informational (observed before deciding)
};

struct UtilityNode {
  std::string id;
  std::vector<std::string> parents;        // chance or decision nodes
  std::vector<double> table;               // per joint parent config, first parent slowest
};

/// Full decision assignment: decision id -> chosen alternative.
using DecisionAssignment = std::map<std::string, std::string>;

struct Policy {
  std::vector<std::pair<std::string, std::string>> choices;  // declaration order
  double expected_utility = 0.0;

  DecisionAssignment assignment() const;
  const std::string& choice(std::string_view decision) const;
};

/// Chance network extended with decision and utility nodes. Internally the
/// decisions are represented as root chance nodes with uniform priors; every
/// evaluation clamps them, so the placeholder prior never influences a
/// result.
class DecisionNetwork {
 public:
  DecisionNetwork() = default;
  DecisionNetwork(Network chance_with_decisions,
                  std::vector<DecisionNode> decisions,
                  std::vector<UtilityNode> utilities);

  const Network& graph() const { return net_; }
  const std::vector<DecisionNode>& decisions() const { return decisions_; }
  const std::vector<UtilityNode>& utilities() const { return utilities_; }

 private:
  Network net_;
  std::vector<DecisionNode> decisions_;
  std::vector<UtilityNode> utilities_;
};

/// Sum over utility nodes of E[u | evidence, decisions]. The assignment must
/// cover every decision exactly once (incomplete_assignment).
double expected_utility(const DecisionNetwork& dn,
                        const DecisionAssignment& assignment,
                        const Evidence& evidence);

/// Exhaustive argmax over joint decision assignments, enumerated in
/// declaration order with alternative index order; ties keep the first
/// (lexicographically smallest) assignment. Guarded at 10^6 joint
/// alternatives (alternative_space_too_large).
Policy optimal_policy(const DecisionNetwork& dn, const Evidence& evidence);

/// Predicate-triggered forced policy fragment, applied before optimization.
struct SafetyOverride {
  std::string name;
  std::function<bool(const DecisionNetwork&, const Evidence&)> when;
  std::vector<std::pair<std::string, std::string>> force;  // decision -> alternative
};

/// Minimum number of consecutive calls a changed recommendation must persist
/// before it is emitted.
struct DwellGuard {
  int min_consecutive = 3;
};

/// One recommendation step: what the optimizer wanted and what was emitted
/// after dwell-guard suppression.
struct Recommendation {
  Policy candidate;
  Policy emitted;
};

/// Overrides are applied first (conflicting_overrides if two force different
/// alternatives for one decision); the guarded candidate is the constrained
/// optimum. A change against the previously emitted policy is suppressed
/// until the same candidate has been recommended for >= guard consecutive
/// calls (the current call included).
Recommendation recommend_with_guards(const DecisionNetwork& dn,
                                     const Evidence& evidence,
                                     std::span<const Recommendation> history,
                                     const DwellGuard& guard,
                                     std::span<const SafetyOverride> overrides);

}  // namespace riskbn
