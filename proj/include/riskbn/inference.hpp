#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskbn/factor.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

struct Query {
  std::vector<std::string> targets;
  Evidence evidence;
};

/// Distribution of one target node.
struct Marginal {
  std::string node;
  std::vector<double> probabilities;               // state-label order
  std::vector<double> std_errors;                  // sampling methods only
};

struct Posterior {
  std::vector<Marginal> marginals;                 // one per query target
  double log_evidence = 0.0;                       // log P(evidence)

  const Marginal& of(std::string_view node) const;
};

/// Exact posterior by variable elimination. Elimination order is the
/// min-degree heuristic on the factor interaction graph with ties broken by
/// node index, so repeated runs are bit-identical.
///
/// Throws invalid_query (bad targets/evidence) and inconsistent_evidence
/// (evidence probability zero).
Posterior posterior_ve(const Network& net, const Query& query);

/// Exact posterior by full joint enumeration. Independent of the factor/VE
/// machinery; serves as the oracle in tests. Guarded by a joint state-space
/// cap of 2^26 (state_space_too_large).
Posterior posterior_enumeration(const Network& net, const Query& query);

/// Likelihood weighting with a fixed seed (mt19937_64); deterministic for a
/// given (query, samples, seed). Reports a per-state standard error of the
/// weighted ratio estimate. Throws all_weights_zero when no sampled weight
/// is positive.
Posterior posterior_lw(const Network& net, const Query& query,
                       std::uint64_t samples, std::uint64_t seed);

/// Joint distribution over `targets` given evidence, normalized, plus
/// log P(evidence). Factor scope is the sorted target node indices.
/// Building block for posterior_ve and expected-utility evaluation.
std::pair<Factor, double> joint_posterior(const Network& net,
                                          const std::vector<std::size_t>& targets,
                                          const Evidence& evidence);

}  // namespace riskbn
