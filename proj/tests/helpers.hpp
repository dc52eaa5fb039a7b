#pragma once

#include <string>
#include <vector>

#include "riskbn/network.hpp"

namespace riskbn::testing {

inline NodeSpec binary(std::string id, std::vector<std::string> parents = {}) {
  return NodeSpec{std::move(id), {"TRUE", "FALSE"}, std::move(parents)};
}

inline Cpt prior(double p_true) {
  return Cpt{2, 1, {p_true, 1.0 - p_true}};
}

/// CPT from the TRUE row only; FALSE row filled with complements.
inline Cpt binary_cpt(std::vector<double> true_row) {
  Cpt cpt;
  cpt.rows = 2;
  cpt.cols = true_row.size();
  cpt.values = true_row;
  for (double v : true_row) cpt.values.push_back(1.0 - v);
  return cpt;
}

/// A -> B chain with P(A)=pa, P(B|A)=b_given_a, P(B|~A)=b_given_not_a.
inline Network chain(double pa, double b_given_a, double b_given_not_a) {
  return build_network({binary("a"), binary("b", {"a"})},
                       {prior(pa), binary_cpt({b_given_a, b_given_not_a})},
                       "chain");
}

}  // namespace riskbn::testing
