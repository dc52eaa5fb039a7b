#include "riskbn/decision.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace riskbn {

DecisionAssignment Policy::assignment() const {
  DecisionAssignment a;
  for (const auto& [d, alt] : choices) a.emplace(d, alt);
  return a;
}

const std::string& Policy::choice(std::string_view decision) const {
  for (const auto& [d, alt] : choices)
    if (d == decision) return alt;
  fail(ErrorCode::invalid_argument,
       "policy has no decision '" + std::string(decision) + "'");
}

DecisionNetwork::DecisionNetwork(Network chance_with_decisions,
                                 std::vector<DecisionNode> decisions,
                                 std::vector<UtilityNode> utilities)
    : net_(std::move(chance_with_decisions)), decisions_(std::move(decisions)),
      utilities_(std::move(utilities)) {
  for (const auto& d : decisions_) {
    std::size_t i = net_.index_of(d.id);
    if (d.alternatives.size() < 2)
      fail(ErrorCode::invalid_argument,
           "decision '" + d.id + "' needs >= 2 alternatives");
    if (net_.spec(i).states != d.alternatives)
      fail(ErrorCode::invalid_argument,
           "decision '" + d.id + "' does not match its graph node");
    for (const auto& p : d.parents)
      net_.index_of(p);  // informational parents must exist
  }
  for (const auto& u : utilities_) {
    if (net_.has_node(u.id))
      fail(ErrorCode::duplicate_node,
           "utility '" + u.id + "' collides with a graph node");
    std::set<std::string> seen(u.parents.begin(), u.parents.end());
    if (seen.size() != u.parents.size())
      fail(ErrorCode::invalid_argument,
           "utility '" + u.id + "' has duplicate parents");
    std::size_t want = 1;
    for (const auto& p : u.parents) want *= net_.cardinality(net_.index_of(p));
    if (u.table.size() != want)
      fail(ErrorCode::cpt_shape_mismatch,
           "utility '" + u.id + "' table has " +
               std::to_string(u.table.size()) + " entries, expected " +
               std::to_string(want));
    for (double v : u.table)
      if (!std::isfinite(v))
        fail(ErrorCode::invalid_argument,
             "utility '" + u.id + "' has a non-finite entry");
  }
}

namespace {

Evidence merged_evidence(const DecisionNetwork& dn,
                         const DecisionAssignment& assignment,
                         const Evidence& evidence) {
  if (assignment.size() != dn.decisions().size())
    fail(ErrorCode::incomplete_assignment,
         "assignment must cover every decision exactly once");
  Evidence merged = evidence;
  for (const auto& d : dn.decisions()) {
    auto it = assignment.find(d.id);
    if (it == assignment.end())
      fail(ErrorCode::incomplete_assignment,
           "no alternative chosen for decision '" + d.id + "'");
    if (std::find(d.alternatives.begin(), d.alternatives.end(), it->second) ==
        d.alternatives.end())
      fail(ErrorCode::unknown_state, "decision '" + d.id +
                                         "' has no alternative '" +
                                         it->second + "'");
    if (evidence.count(d.id))
      fail(ErrorCode::invalid_query,
           "evidence must not mention decision '" + d.id + "'");
    merged.emplace(d.id, it->second);
  }
  return merged;
}

}  // namespace

double expected_utility(const DecisionNetwork& dn,
                        const DecisionAssignment& assignment,
                        const Evidence& evidence) {
  Evidence merged = merged_evidence(dn, assignment, evidence);
  const Network& net = dn.graph();
  double eu = 0.0;
  for (const auto& u : dn.utilities()) {
    if (u.parents.empty()) {
      eu += u.table[0];
      continue;
    }
    std::vector<std::size_t> parents;
    for (const auto& p : u.parents) parents.push_back(net.index_of(p));
    // parents already clamped by evidence/decisions contribute a fixed index
    std::vector<std::size_t> card(parents.size());
    std::vector<int> fixed(parents.size(), -1);
    std::vector<std::size_t> query_targets;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      card[k] = net.cardinality(parents[k]);
      auto it = merged.find(net.spec(parents[k]).id);
      if (it != merged.end())
        fixed[k] = static_cast<int>(net.state_index(parents[k], it->second));
      else
        query_targets.push_back(parents[k]);
    }
    Factor joint;  // over sorted query_targets
    if (!query_targets.empty()) {
      auto [j, log_z] = joint_posterior(net, query_targets, merged);
      joint = std::move(j);
    } else {
      joint = Factor::constant(1.0);
    }
    // walk all configurations of the utility parents
    std::vector<std::size_t> idx(parents.size(), 0);
    std::size_t total = u.table.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      // config index -> per-parent states (first parent slowest)
      std::size_t rem = flat;
      bool consistent = true;
      for (std::size_t k = parents.size(); k-- > 0;) {
        idx[k] = rem % card[k];
        rem /= card[k];
      }
      for (std::size_t k = 0; k < parents.size(); ++k)
        if (fixed[k] >= 0 && idx[k] != static_cast<std::size_t>(fixed[k]))
          consistent = false;
      if (!consistent) continue;
      // probability of this configuration from the joint over free parents
      double prob = 1.0;
      if (!joint.scope().empty()) {
        std::size_t jidx = 0;
        for (int v : joint.scope()) {
          std::size_t k = 0;
          while (parents[k] != static_cast<std::size_t>(v)) ++k;
          jidx = jidx * card[k] + idx[k];
        }
        prob = joint.table()[jidx];
      }
      eu += prob * u.table[flat];
    }
  }
  return eu;
}

namespace {

void for_each_assignment(
    const std::vector<DecisionNode>& decisions,
    const std::function<void(const DecisionAssignment&)>& fn) {
  std::vector<std::size_t> idx(decisions.size(), 0);
  while (true) {
    DecisionAssignment a;
    for (std::size_t k = 0; k < decisions.size(); ++k)
      a.emplace(decisions[k].id, decisions[k].alternatives[idx[k]]);
    fn(a);
    std::size_t k = decisions.size();
    while (k-- > 0) {
      if (++idx[k] < decisions[k].alternatives.size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
  }
}

Policy policy_from(const DecisionNetwork& dn, const DecisionAssignment& a,
                   double eu) {
  Policy p;
  for (const auto& d : dn.decisions()) p.choices.emplace_back(d.id, a.at(d.id));
  p.expected_utility = eu;
  return p;
}

Policy constrained_optimum(
    const DecisionNetwork& dn, const Evidence& evidence,
    const std::vector<std::pair<std::string, std::string>>& forced) {
  double space = 1.0;
  for (const auto& d : dn.decisions())
    space *= static_cast<double>(d.alternatives.size());
  if (space > 1e6)
    fail(ErrorCode::alternative_space_too_large,
         "joint alternative space exceeds 10^6");
  if (dn.decisions().empty())
    fail(ErrorCode::invalid_argument, "network has no decisions");

  bool have_best = false;
  DecisionAssignment best;
  double best_eu = 0.0;
  for_each_assignment(dn.decisions(), [&](const DecisionAssignment& a) {
    for (const auto& [d, alt] : forced)
      if (a.at(d) != alt) return;
    double eu = expected_utility(dn, a, evidence);
    if (!have_best || eu > best_eu) {
      have_best = true;
      best = a;
      best_eu = eu;
    }
  });
  if (!have_best)
    fail(ErrorCode::conflicting_overrides,
         "forced fragments admit no assignment");
  return policy_from(dn, best, best_eu);
}

}  // namespace

Policy optimal_policy(const DecisionNetwork& dn, const Evidence& evidence) {
  return constrained_optimum(dn, evidence, {});
}

Recommendation recommend_with_guards(const DecisionNetwork& dn,
                                     const Evidence& evidence,
                                     std::span<const Recommendation> history,
                                     const DwellGuard& guard,
                                     std::span<const SafetyOverride> overrides) {
  if (guard.min_consecutive < 1)
    fail(ErrorCode::invalid_argument, "dwell guard must be >= 1");

  std::vector<std::pair<std::string, std::string>> forced;
  for (const auto& ov : overrides) {
    if (!ov.when(dn, evidence)) continue;
    for (const auto& [d, alt] : ov.force) {
      bool known = false;
      for (const auto& dec : dn.decisions())
        if (dec.id == d) {
          known = std::find(dec.alternatives.begin(), dec.alternatives.end(),
                            alt) != dec.alternatives.end();
          break;
        }
      if (!known)
        fail(ErrorCode::invalid_argument,
             "override '" + ov.name + "' forces unknown alternative " + d +
                 "=" + alt);
      for (const auto& [fd, falt] : forced)
        if (fd == d && falt != alt)
          fail(ErrorCode::conflicting_overrides,
               "overrides force both " + d + "=" + falt + " and " + d + "=" +
                   alt);
      forced.emplace_back(d, alt);
    }
  }

  Policy candidate = constrained_optimum(dn, evidence, forced);
  if (history.empty())
    return {candidate, candidate};

  const Policy& last_emitted = history.back().emitted;
  if (candidate.choices == last_emitted.choices) {
    Policy emitted = candidate;
    return {candidate, emitted};
  }
  // count consecutive prior calls that already recommended this candidate
  int streak = 1;  // current call
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->candidate.choices == candidate.choices)
      ++streak;
    else
      break;
  }
  if (streak >= guard.min_consecutive)
    return {candidate, candidate};
  // suppressed: re-emit the previous policy, utility under current evidence
  Policy emitted = last_emitted;
  emitted.expected_utility =
      expected_utility(dn, last_emitted.assignment(), evidence);
  return {candidate, emitted};
}

}  // namespace riskbn
